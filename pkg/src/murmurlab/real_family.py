"""Weighted murmuration averages of real (quadratic) Dirichlet characters.

The empirical object is a double sum over primes p in a short window
[yX, yX + X^delta] and over odd squarefree integers d weighted by a
compactly supported Phi >= 0:

    (log X / X^(1+delta)) * sum_p sum_d Phi(d/X) sym(d, p) sqrt(p),

with sym = chi_{8d}(p) (variant "eight_d") or the Kronecker symbol
(d/p) (variant "dagger").  Its large-X limit is expressible two ways,
and both are implemented and cross-checked:

  * primal: (1/2) sum_{a odd} mu(a)/a^2 sum_{m>=1} (-1)^m T(m^2/(2a^2y))
    (eight_d; the dagger variant drops (-1)^m and the factor 2), where
    T(xi) = integral of (cos(2 pi xi x) + sin(2 pi xi x)) Phi(x) dx;
  * dual: -(2/pi^2) T(0) + sqrt(y/2) sum_{n odd} b_n HF(n sqrt(y/2))
    (dagger: + (sqrt(y)/2) sum_{n>=1} b_n HF(n sqrt(y))), where
    HF(xi) = 2 * integral_0^inf T(w^2) cos(2 pi w xi) dw and
    b_n = prod over odd primes p | n of (1 - 1/p).

The dual series is absolutely convergent and serves as the reference
evaluator; the primal a-sum for the dagger variant converges only
conditionally (the inner sum grows like a sqrt(y) before Mobius
cancellation), so that path reports an error estimate with its value.

Hot path: evaluating sym(d, p) for ~10^5 values of d per prime is done
through a quadratic-residue table mod p built once per prime (O(p)),
turning billions of Kronecker evaluations into table lookups.  All
accumulations are exactly compensated and ordered, so results do not
depend on thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from . import arith
from ._quad import adaptive_simpson

TWO_OVER_PI2 = 2.0 / math.pi**2

VARIANTS = ("eight_d", "dagger")


# ---------------------------------------------------------------------------
# Weight functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """Nonnegative test function with compact support [lo, hi].

    kind "bump": exp(-1/(1-u^2)) with u = 2(x - (a+b)/2)/(b-a), smooth
    and positive on (a, b).  kind "indicator": the sharp cut-off of
    (a, b).  kind "tabulated": linear interpolation of nonnegative
    samples.
    """

    kind: str
    a: float
    b: float
    samples: tuple[tuple[float, ...], tuple[float, ...]] | None = None

    def __post_init__(self):
        if self.kind not in ("bump", "indicator", "tabulated"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if not self.a < self.b:
            raise ValueError("weight support needs a < b")

    @property
    def support(self) -> tuple[float, float]:
        return self.a, self.b

    @property
    def radius(self) -> float:
        """beta = sup |x| over the support."""
        return max(abs(self.a), abs(self.b))

    @property
    def smooth(self) -> bool:
        return self.kind == "bump"

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        inside = (x > self.a) & (x < self.b)
        if self.kind == "indicator":
            out = inside.astype(np.float64)
        elif self.kind == "bump":
            u = (2.0 * x - (self.a + self.b)) / (self.b - self.a)
            out = np.zeros_like(x)
            with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                val = np.exp(-1.0 / (1.0 - u * u))
            out[inside] = val[inside]
        else:
            xs, ys = self.samples
            out = np.interp(x, xs, ys, left=0.0, right=0.0) * inside
        if out.ndim == 0:
            return float(out)
        return out


def bump_weight(a: float, b: float) -> Weight:
    return Weight("bump", a, b)


def indicator_weight(a: float, b: float) -> Weight:
    return Weight("indicator", a, b)


def tabulated_weight(xs, ys) -> Weight:
    ys = [float(v) for v in ys]
    if any(v < 0 for v in ys):
        raise ValueError("tabulated weight must be nonnegative")
    return Weight(
        "tabulated", float(xs[0]), float(xs[-1]), (tuple(map(float, xs)), tuple(ys))
    )


@dataclass(frozen=True)
class TruncationPolicy:
    """Cutoffs and tolerances for the infinite sums and quadratures."""

    a_max: int = 1000
    n_max: int = 10_000
    quad_tol: float = 1e-10
    m_cutoff_tol: float = 1e-14
    grid_step: float = 1.0 / 2048.0

    def __post_init__(self):
        if self.a_max < 1 or self.n_max < 1:
            raise ValueError("cutoffs must be >= 1")
        if min(self.quad_tol, self.m_cutoff_tol, self.grid_step) <= 0:
            raise ValueError("tolerances must be positive")


DEFAULT_POLICY = TruncationPolicy()


# ---------------------------------------------------------------------------
# The cos+sin transform
# ---------------------------------------------------------------------------

def tilde_transform(weight: Weight, xi, policy: TruncationPolicy = DEFAULT_POLICY):
    """T(xi) = integral of (cos(2 pi xi x) + sin(2 pi xi x)) Phi(x) dx.

    Composite Gauss-Legendre over the support with oscillation-aware
    paneling: panel width <= min(support/16, 1/(4|xi| + 1)).  Accepts a
    scalar or an array of frequencies.
    """
    scalar = np.isscalar(xi)
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    out = np.empty_like(xi_arr)
    lo, hi = weight.support
    width = hi - lo
    # group frequencies by their panel requirement (powers of two)
    panels_needed = np.ceil(width / np.minimum(width / 16.0, 1.0 / (4.0 * np.abs(xi_arr) + 1.0))).astype(np.int64)
    order = np.argsort(panels_needed, kind="stable")
    glx, glw = np.polynomial.legendre.leggauss(12)
    i = 0
    while i < len(order):
        pc = 1 << int(panels_needed[order[i]] - 1).bit_length()
        j = i
        while j < len(order) and panels_needed[order[j]] <= pc:
            j += 1
        idx = order[i:j]
        edges = np.linspace(lo, hi, pc + 1)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        nodes = (mid[:, None] + half[:, None] * glx[None, :]).reshape(-1)
        wts = (half[:, None] * glw[None, :]).reshape(-1)
        fw = weight(nodes) * wts
        phase = 2.0 * np.pi * nodes[None, :] * xi_arr[idx][:, None]
        out[idx] = (np.cos(phase) + np.sin(phase)) @ fw
        i = j
    return float(out[0]) if scalar else out


def tilde_transform_simpson(
    weight: Weight, xi: float, policy: TruncationPolicy = DEFAULT_POLICY
) -> float:
    """Adaptive-Simpson evaluation of the same transform (cross-check path)."""
    lo, hi = weight.support
    width = hi - lo
    panel = min(width / 16.0, 1.0 / (4.0 * abs(xi) + 1.0))
    n_panels = int(math.ceil(width / panel))
    edges = np.linspace(lo, hi, n_panels + 1)

    def f(x: float) -> float:
        ph = 2.0 * math.pi * xi * x
        return (math.cos(ph) + math.sin(ph)) * float(weight(x))

    tol = policy.quad_tol / n_panels
    return math.fsum(
        adaptive_simpson(f, float(a), float(b), tol)
        for a, b in zip(edges[:-1], edges[1:])
    )


def _indicator_tilde(weight: Weight, xi: np.ndarray) -> np.ndarray:
    """Closed-form transform of the sharp cut-off 1_(a,b)."""
    a, b = weight.support
    xi = np.asarray(xi, dtype=np.float64)
    out = np.empty_like(xi)
    small = np.abs(xi) < 1e-12
    out[small] = b - a
    z = xi[~small]
    tp = 2.0 * np.pi * z
    out[~small] = (
        np.sin(tp * b) - np.sin(tp * a) + np.cos(tp * a) - np.cos(tp * b)
    ) / tp
    return out


class TransformGrid:
    """Uniform-grid precomputation of the transform with cubic interpolation.

    Built by one FFT-based quadrature of the defining integral (the
    support samples are a plain trapezoid, superalgebraically accurate
    because every derivative of a bump vanishes at the endpoints).  The
    grid extends to the frequency beyond which |T| stays below the
    policy's m_cutoff_tol; that frequency is the m-sum truncation point.
    """

    def __init__(self, weight: Weight, policy: TruncationPolicy):
        if not weight.smooth:
            raise ValueError("transform grids require a smooth (bump) weight")
        self.weight = weight
        self.policy = policy
        lo, hi = weight.support
        width = hi - lo
        m_samples = 4096
        delta = width / m_samples
        k_fft = 1 << int(math.ceil(math.log2(m_samples / (width * policy.grid_step))))
        step = m_samples / (width * k_fft)
        x = lo + delta * np.arange(m_samples)
        f = np.zeros(k_fft, dtype=complex)
        f[:m_samples] = weight(x)
        spectrum = np.fft.ifft(f) * k_fft  # S[g] = sum_j f_j e(+jg/K)
        g = np.arange(k_fft // 2)
        fourier = delta * np.exp(2j * np.pi * (g * step) * lo) * spectrum[: k_fft // 2]
        values = fourier.real + fourier.imag

        env = np.maximum.accumulate(np.abs(values)[::-1])[::-1]
        below = np.flatnonzero(env < policy.m_cutoff_tol)
        if below.size == 0:
            raise ValueError(
                "transform envelope never falls below m_cutoff_tol on the grid"
            )
        cut_idx = int(below[0])
        keep = min(cut_idx + 64, len(values))
        self.step = step
        self.cutoff = cut_idx * step
        self.values = values[:keep].copy()
        self.xi_end = (keep - 1) * step
        spline = CubicSpline(np.arange(keep) * step, self.values)
        self._coeffs = np.ascontiguousarray(spline.c)  # (4, keep-1)
        self._hhat_cutoff: float | None = None

    @property
    def tilde0(self) -> float:
        """T(0) = integral of Phi."""
        return float(self.values[0])

    def tilde(self, xi) -> np.ndarray:
        """Interpolated transform for xi >= 0; zero beyond the grid end."""
        xi = np.asarray(xi, dtype=np.float64)
        idx = np.clip((xi / self.step).astype(np.int64), 0, len(self.values) - 2)
        t = xi - idx * self.step
        c = self._coeffs
        out = ((c[0, idx] * t + c[1, idx]) * t + c[2, idx]) * t + c[3, idx]
        return np.where(xi >= self.xi_end, 0.0, out)

    # -- the half-line cosine transform of w -> T(w^2) ----------------------

    def half_cos_transform(self, xi) -> np.ndarray:
        """HF(xi) = 2 * integral_0^wmax T(w^2) cos(2 pi w xi) dw.

        The integrand support ends at wmax = sqrt(cutoff); panels are
        sized for the combined oscillation of the cosine and of T(w^2).
        """
        xi = np.atleast_1d(np.asarray(xi, dtype=np.float64))
        w_max = math.sqrt(self.cutoff)
        beta = self.weight.radius
        out = np.empty_like(xi)
        order = np.argsort(xi, kind="stable")
        glx, glw = np.polynomial.legendre.leggauss(8)
        i = 0
        while i < len(order):
            top = xi[order[i]]
            bin_top = max(4.0, 2.0 ** math.ceil(math.log2(max(top, 1e-9))))
            j = i
            while j < len(order) and xi[order[j]] <= bin_top:
                j += 1
            idx = order[i:j]
            # two GL8 panels per combined oscillation cycle keep the
            # accumulated quadrature noise below m_cutoff_tol
            freq = bin_top + 2.0 * beta * w_max
            panels = int(math.ceil(w_max * 2.0 * (freq + 1.0)))
            edges = np.linspace(0.0, w_max, panels + 1)
            mid = 0.5 * (edges[1:] + edges[:-1])
            half = 0.5 * (edges[1:] - edges[:-1])
            nodes = (mid[:, None] + half[:, None] * glx[None, :]).reshape(-1)
            wts = (half[:, None] * glw[None, :]).reshape(-1)
            hw = self.tilde(nodes * nodes) * wts
            for k0 in range(0, len(idx), 512):
                blk = idx[k0 : k0 + 512]
                out[blk] = 2.0 * (
                    np.cos(2.0 * np.pi * nodes[None, :] * xi[blk][:, None]) @ hw
                )
            i = j
        return out

    def half_cos_cutoff(self) -> float:
        """Frequency beyond which |HF| stays below m_cutoff_tol (probed)."""
        if self._hhat_cutoff is None:
            probe = np.arange(0.0, 100.0 + 1e-9, 0.25)
            vals = np.abs(self.half_cos_transform(probe))
            env = np.maximum.accumulate(vals[::-1])[::-1]
            below = np.flatnonzero(env < self.policy.m_cutoff_tol)
            self._hhat_cutoff = float(probe[below[0]]) if below.size else 100.0
        return self._hhat_cutoff


_GRID_CACHE: dict[tuple[Weight, TruncationPolicy], TransformGrid] = {}


def transform_grid(weight: Weight, policy: TruncationPolicy = DEFAULT_POLICY) -> TransformGrid:
    key = (weight, policy)
    if key not in _GRID_CACHE:
        _GRID_CACHE[key] = TransformGrid(weight, policy)
    return _GRID_CACHE[key]


# ---------------------------------------------------------------------------
# Empirical double sums
# ---------------------------------------------------------------------------

def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def _odd_squarefree_in(lo: float, hi: float) -> np.ndarray:
    """Signed odd squarefree integers d with lo <= d <= hi (no zero)."""
    parts = []
    ihi = int(math.floor(hi + 1e-9))
    ilo = int(math.ceil(lo - 1e-9))
    pos_lo, pos_hi = max(ilo, 1), ihi
    if pos_lo <= pos_hi:
        n = np.arange(pos_lo, pos_hi + 1, dtype=np.int64)
        keep = (n % 2 == 1) & arith.squarefree_mask_range(pos_lo, pos_hi)
        parts.append(n[keep])
    neg_lo, neg_hi = ilo, min(ihi, -1)
    if neg_lo <= neg_hi:
        n = np.arange(-neg_hi, -neg_lo + 1, dtype=np.int64)
        keep = (n % 2 == 1) & arith.squarefree_mask_range(int(n[0]), int(n[-1]))
        parts.append(-n[keep])
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.sort(np.concatenate(parts))


def _legendre_table(p: int) -> np.ndarray:
    table = np.full(p, -1, dtype=np.int8)
    table[0] = 0
    table[(np.arange(1, (p - 1) // 2 + 1, dtype=np.int64) ** 2) % p] = 1
    return table


def _two_symbol(p: int) -> int:
    """(2/p) for odd p."""
    return 1 if p % 8 in (1, 7) else -1


def window_primes(y: float, X: int, delta: float) -> list[int]:
    """Primes in the real interval [yX, yX + X^delta]."""
    lo = y * X
    hi = y * X + X**delta
    return arith.primes_in_interval(int(math.ceil(lo - 1e-9)), int(math.floor(hi + 1e-9)))


def _prime_term(p: int, d_arr: np.ndarray, weights: np.ndarray, variant: str) -> float:
    """sum_d Phi(d/X) sym(d, p) sqrt(p) for one odd prime p."""
    table = _legendre_table(p)
    sym = table[np.mod(d_arr, p)].astype(np.float64)
    total = float(np.sum(weights * sym))
    if variant == "eight_d":
        total *= _two_symbol(p)
    return total * math.sqrt(p)


def empirical_average(
    y: float,
    X: int,
    delta: float,
    weight: Weight,
    variant: str = "eight_d",
    threads: int | None = None,
) -> float:
    """The weighted double sum over window primes and odd squarefree d.

    Per prime, symbols are read from a quadratic-residue table mod p;
    per-prime contributions are merged in ascending-p order with exact
    compensated summation, so the result is independent of threads.
    """
    _check_variant(variant)
    if y * X <= 2:
        raise ValueError("window start yX must exceed 2")
    lo, hi = weight.support
    d_arr = _odd_squarefree_in(lo * X, hi * X)
    w_arr = weight(d_arr / X)
    keep = w_arr > 0
    d_arr, w_arr = d_arr[keep], w_arr[keep]
    primes = window_primes(y, X, delta)
    if not d_arr.size or not primes:
        return 0.0
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            terms = list(
                pool.map(lambda p: _prime_term(p, d_arr, w_arr, variant), primes)
            )
    else:
        terms = [_prime_term(p, d_arr, w_arr, variant) for p in primes]
    return math.log(X) / X ** (1 + delta) * math.fsum(terms)


def empirical_average_naive(
    y: float, X: int, delta: float, weight: Weight, variant: str = "eight_d"
) -> float:
    """Per-pair Kronecker oracle for the empirical sum (tiny X only)."""
    _check_variant(variant)
    if y * X <= 2:
        raise ValueError("window start yX must exceed 2")
    lo, hi = weight.support
    total = []
    for p in window_primes(y, X, delta):
        for d in _odd_squarefree_in(lo * X, hi * X):
            d = int(d)
            sym = (
                arith.kronecker_symbol(8 * d, p)
                if variant == "eight_d"
                else arith.kronecker_symbol(d, p)
            )
            total.append(float(weight(d / X)) * sym * math.sqrt(p))
    return math.log(X) / X ** (1 + delta) * math.fsum(total)


@dataclass(frozen=True)
class DoubleAverage:
    value: float
    weight_mass: float  # (1/X) sum_d Phi(d/X)
    prime_count: int


def double_average(
    y: float, X: int, delta: float, weight: Weight, threads: int | None = None
) -> DoubleAverage:
    """Literal per-prime average of weighted character sums.

    value = mean over window primes of (sum_d Phi(d/X) chi_8d(p) sqrt(p))
    divided by sum_d Phi(d/X); also reports the weight mass
    (1/X) sum_d Phi(d/X), whose large-X limit is (4/pi^2) integral Phi.
    """
    if y * X <= 2:
        raise ValueError("window start yX must exceed 2")
    lo, hi = weight.support
    d_arr = _odd_squarefree_in(lo * X, hi * X)
    w_arr = weight(d_arr / X)
    keep = w_arr > 0
    d_arr, w_arr = d_arr[keep], w_arr[keep]
    mass = float(np.sum(w_arr))
    if mass == 0:
        raise ValueError("weight mass vanishes on this window")
    primes = window_primes(y, X, delta)
    if not primes:
        raise ValueError("no prime in the window")
    terms = [_prime_term(p, d_arr, w_arr, "eight_d") for p in primes]
    value = math.fsum(t / mass for t in terms) / len(primes)
    return DoubleAverage(value=value, weight_mass=mass / X, prime_count=len(primes))


# ---------------------------------------------------------------------------
# Divisor-sum coefficients
# ---------------------------------------------------------------------------

def b_coefficient(n: int, variant: str = "eight_d") -> Fraction:
    """Exact b_n = sum over odd squarefree a | n of mu(a)/a.

    Multiplicative with b_{p^k} = 1 - 1/p for odd p.  The eight_d
    variant sets b_n = 0 for even n; the dagger variant keeps the
    divisor sum for all n (so b_{2^k} = 1).
    """
    _check_variant(variant)
    if n < 1:
        raise ValueError("n must be >= 1")
    if variant == "eight_d" and n % 2 == 0:
        return Fraction(0)
    out = Fraction(1)
    for p, _ in arith.factorize(n):
        if p > 2:
            out *= Fraction(p - 1, p)
    return out


@lru_cache(maxsize=8)
def _b_array(n_max: int) -> np.ndarray:
    """b_n for 1 <= n <= n_max as float64 (dagger values; index n)."""
    b = np.ones(n_max + 1, dtype=np.float64)
    b[0] = 0.0
    for p in arith.primes_in_interval(3, n_max):
        b[p::p] *= 1.0 - 1.0 / p
    b.setflags(write=False)
    return b


# ---------------------------------------------------------------------------
# Analytic densities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimalDensity:
    value: float
    error_estimate: float


def _tilde_evaluator(weight: Weight, policy: TruncationPolicy):
    """(eval(xi_array), cutoff) pair for the m-sum truncation.

    Smooth weights use the precomputed grid with its envelope cutoff;
    the sharp cut-off uses its closed form with a fixed truncation that
    is adequate for figure overlays (|T| decays only like 1/xi there).
    """
    if weight.smooth:
        grid = transform_grid(weight, policy)
        return grid.tilde, grid.cutoff, grid.tilde0
    if weight.kind == "indicator":
        cutoff = 3600.0  # |T| <= 2/(pi*xi): alternating tail ~ 1e-4
        return (lambda xi: _indicator_tilde(weight, xi)), cutoff, weight.b - weight.a
    raise ValueError("analytic densities need a bump or indicator weight")


def density_primal(
    y: float,
    weight: Weight,
    variant: str = "eight_d",
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> PrimalDensity:
    """Mobius double sum for the limiting density, truncated at a_max.

    eight_d: (1/2) sum_{a odd <= a_max} mu(a)/a^2
                  sum_m (-1)^m T(m^2/(2 a^2 y));
    dagger:  same without (-1)^m and with argument m^2/(a^2 y).  The
    m-sums stop once the argument passes the transform's envelope
    cutoff.  The error estimate is the spread of the partial a-sums
    over the last quarter of the range (the dagger a-sum converges only
    conditionally, so this estimate is the honest accuracy statement).
    """
    _check_variant(variant)
    if y <= 0:
        raise ValueError("y must be positive")
    tilde_eval, cutoff, _ = _tilde_evaluator(weight, policy)
    mu = arith.mobius_range(1, policy.a_max).astype(np.int64)
    contribs = []
    alternating = variant == "eight_d"
    for a in range(1, policy.a_max + 1, 2):
        m = mu[a - 1]
        if m == 0:
            continue
        scale = 1.0 / (2.0 * a * a * y) if alternating else 1.0 / (a * a * y)
        m_top = int(math.ceil(math.sqrt(cutoff / scale)))
        if alternating and m_top % 2 == 1:
            m_top += 1  # complete sign pairs
        m_top = max(m_top, 2)
        marr = np.arange(1, m_top + 1, dtype=np.float64)
        vals = tilde_eval(scale * marr * marr)
        if alternating:
            signs = np.where(np.arange(1, m_top + 1) % 2 == 0, 1.0, -1.0)
            inner = float(np.sum(signs * vals))
        else:
            inner = float(np.sum(vals))
        contribs.append(m / (a * a) * inner)
    partial = 0.5 * np.cumsum(contribs)
    value = float(partial[-1])
    tail = partial[max(0, int(len(partial) * 0.75)) :]
    err = float(np.max(np.abs(tail - value))) if len(tail) > 1 else 0.0
    if not weight.smooth:
        err += 1e-3  # sharp-weight m-sum truncation is figure-quality only
    return PrimalDensity(value=value, error_estimate=err)


def density_dual(
    y: float,
    weight: Weight,
    variant: str = "eight_d",
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> float:
    """Divisor-sum form of the limiting density (reference evaluator).

    -(2/pi^2) T(0) + sqrt(y/2) sum_{n odd <= n_max} b_n HF(n sqrt(y/2))
    for eight_d; the dagger variant sums all n with step sqrt(y) and
    prefactor sqrt(y)/2.  Absolutely convergent; terms beyond the
    probed envelope cutoff of HF are dropped as identically negligible.
    Requires a smooth weight (a sharp cut-off's transform decays too
    slowly for the half-line integral to be truncated).
    """
    _check_variant(variant)
    if y <= 0:
        raise ValueError("y must be positive")
    if not weight.smooth:
        raise ValueError(
            "the divisor-sum density requires a smooth (bump) weight; "
            "use density_primal for sharp cut-offs"
        )
    grid = transform_grid(weight, policy)
    const = -TWO_OVER_PI2 * grid.tilde0
    if variant == "eight_d":
        step = math.sqrt(y / 2.0)
        n = np.arange(1, policy.n_max + 1, 2, dtype=np.int64)
        pref = step
    else:
        step = math.sqrt(y)
        n = np.arange(1, policy.n_max + 1, dtype=np.int64)
        pref = step / 2.0
    xi = n * step
    keep = xi <= grid.half_cos_cutoff()
    n, xi = n[keep], xi[keep]
    if n.size == 0:
        return const
    hf = grid.half_cos_transform(xi)
    b = _b_array(policy.n_max)[n]
    return const + pref * math.fsum((b * hf).tolist())


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

def character_prime_partial_sum(k: int, t: float) -> int:
    """psi_k(t) = sum over primes 3 <= p <= t of (k/p)."""
    if t < 3:
        return 0
    return sum(
        arith.kronecker_symbol(k, p)
        for p in arith.primes_in_interval(3, int(math.floor(t + 1e-9)))
    )


@dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float


def poisson_identity_check(
    p: int,
    X: int,
    A: int,
    weight: Weight,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> IdentityCheck:
    """Both sides of the finite Mobius/Poisson summation identity.

    LHS: (1/X) sum over odd d of (sum_{a^2 | |d|, a <= A} mu(a))
         Phi(d/X) (d/p) sqrt(p).
    RHS: (1/2)(2/p) sum_{a <= A, (a,2p)=1} mu(a)/a^2
         sum_k (-1)^k (k/p) T(kX/(2 a^2 p)).

    Both sides are computed from independent code paths; smoothness of
    the weight is load-bearing for the k-sum truncation, so sharp
    weights are rejected.
    """
    if not weight.smooth:
        raise ValueError("the summation identity check needs a smooth weight")
    if p % 2 == 0 or not arith.is_prime_u64(p):
        raise ValueError("p must be an odd prime")
    beta = weight.radius
    if not 0 < A <= math.sqrt(beta * X):
        raise ValueError("need 0 < A <= sqrt(beta X)")

    # left side: finite signed d-sum
    top = int(math.floor(beta * X + 1e-9))
    coeff = np.zeros(top + 1, dtype=np.int64)
    for a in range(1, min(A, int(math.isqrt(top))) + 1):
        coeff[a * a :: a * a] += arith.mobius(a)
    table = _legendre_table(p)
    lhs_terms = []
    for sign in (1, -1):
        d = sign * np.arange(1, top + 1, 2, dtype=np.int64)
        w = weight(d / X)
        sym = table[np.mod(d, p)].astype(np.float64)
        lhs_terms.extend((coeff[np.abs(d)] * w * sym).tolist())
    lhs = math.fsum(lhs_terms) * math.sqrt(p) / X

    # right side: Mobius-weighted twisted transform sums
    grid = transform_grid(weight, policy)
    rhs_terms = []
    for a in range(1, A + 1):
        mu_a = arith.mobius(a)
        if mu_a == 0 or a % 2 == 0 or a % p == 0:
            continue
        k_top = int(math.ceil(grid.cutoff * 2 * a * a * p / X)) + 1
        k = np.arange(-k_top, k_top + 1, dtype=np.int64)
        k = k[k != 0]
        vals = tilde_transform(weight, k * X / (2.0 * a * a * p), policy)
        signs = np.where(k % 2 == 0, 1.0, -1.0)
        sym = table[np.mod(k, p)].astype(np.float64)
        rhs_terms.append(mu_a / (a * a) * float(np.sum(signs * sym * vals)))
    rhs = 0.5 * _two_symbol(p) * math.fsum(rhs_terms)
    return IdentityCheck(lhs=lhs, rhs=rhs)
