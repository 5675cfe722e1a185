"""Empirical murmuration functions for complex Dirichlet characters.

Conductor-window averages of chi(p)/tau(chi), with p the prime ceiling
of y*X, over prime conductors (geometric window [X, cX] or short window
[X, X + X^delta]) and over general conductors N != 2 mod 4, together
with the analytic limits they converge to.

Every average exists in two compute modes that are tested against each
other:

  * brute:  enumerate the full dual group per conductor and take direct
    O(N) Gauss sums (the oracle path, bounded conductors);
  * closed: per-conductor trigonometric closed forms.  For prime N,
    sum over D+ is ((N-1)/N) cos(2 pi p/N) + 1/N; for general N the
    principal Gauss sum contributes mu(N), so the even closed form is
    -mu(N)/N + (phi(N)/N) cos(2 pi p/N) and the combined sum over
    primitive and imprimitive characters telescopes to it exactly.

Conductors sharing a factor with p contribute zero in both modes (all
character values vanish), which in particular zeroes the p = N term
responsible for the visual discontinuity near y = 1.

Windows are inclusive at both endpoints.  Summation over N is in
ascending order with exact compensated accumulation, so results are
independent of any task-level parallelism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd

import numpy as np

from . import arith, characters
from ._quad import adaptive_simpson, fsum_complex

FIVE_OVER_PI2 = 5.0 / math.pi**2

#: conductor cap for brute-force enumeration inside window sums
_BRUTE_WINDOW_BOUND = 4000


class EmptySWindowError(ValueError):
    """The special conductor set S meets the requested window nowhere."""


@dataclass(frozen=True)
class GeometricWindow:
    """Conductors N in [X, cX], both endpoints included."""

    X: int
    c: float

    def __post_init__(self):
        if self.X < 2 or self.c <= 1:
            raise ValueError("geometric window needs X >= 2 and c > 1")

    def conductor_range(self) -> tuple[int, int]:
        return self.X, int(math.floor(self.c * self.X + 1e-9))

    def prefactor(self) -> float:
        return 1.0 / self.X


@dataclass(frozen=True)
class ShortWindow:
    """Conductors N in [X, X + X^delta], both endpoints included."""

    X: int
    delta: float

    def __post_init__(self):
        if self.X < 2 or not 0 < self.delta < 1:
            raise ValueError("short window needs X >= 2 and delta in (0, 1)")

    def conductor_range(self) -> tuple[int, int]:
        return self.X, int(math.floor(self.X + self.X**self.delta + 1e-9))

    def prefactor(self) -> float:
        return 1.0 / self.X**self.delta


Window = GeometricWindow | ShortWindow


def prime_ceiling(y: float, X: int) -> int:
    """p = smallest prime >= y*X (2 whenever y*X <= 2)."""
    if y < 0:
        raise ValueError("y must be nonnegative")
    return arith.next_prime_at_or_above(max(y * X, 2.0))


def _check_mode(mode: str) -> None:
    if mode not in ("brute", "closed"):
        raise ValueError(f"mode must be 'brute' or 'closed', got {mode!r}")


def _check_parity(parity: int) -> None:
    if parity not in (1, -1):
        raise ValueError("parity must be +1 or -1")


# ---------------------------------------------------------------------------
# Prime-conductor windows
# ---------------------------------------------------------------------------

def _prime_window_value(p: int, conductors: list[int], parity: int, mode: str) -> complex:
    family = "D+" if parity == 1 else "D-"
    terms = []
    for N in conductors:
        if p == N:
            terms.append(0j)  # chi(p) = 0 for every chi mod N
        elif mode == "brute":
            terms.append(characters.normalized_character_sum(N, p, family))
        else:
            terms.append(characters.closed_form_primitive_sum(N, p, parity))
    return fsum_complex(terms)


def prime_window_average(
    y: float, X: int, c: float, parity: int, mode: str = "closed"
) -> complex:
    """(log X / X) * sum over prime N in [X, cX] of sum_{D+-} chi(p)/tau(chi)."""
    _check_mode(mode)
    _check_parity(parity)
    window = GeometricWindow(X, c)
    lo, hi = window.conductor_range()
    p = prime_ceiling(y, X)
    conductors = arith.primes_in_interval(lo, hi)
    if mode == "brute" and hi > _BRUTE_WINDOW_BOUND:
        raise ValueError("brute mode is bounded to desk-scale windows")
    return math.log(X) / X * _prime_window_value(p, conductors, parity, mode)


def prime_window_average_short(
    y: float, X: int, delta: float, parity: int, mode: str = "closed"
) -> complex:
    """(log X / X^delta) * the same sum over prime N in [X, X + X^delta]."""
    _check_mode(mode)
    _check_parity(parity)
    window = ShortWindow(X, delta)
    lo, hi = window.conductor_range()
    p = prime_ceiling(y, X)
    conductors = arith.primes_in_interval(lo, hi)
    if mode == "brute" and hi > _BRUTE_WINDOW_BOUND:
        raise ValueError("brute mode is bounded to desk-scale windows")
    return math.log(X) / X**delta * _prime_window_value(p, conductors, parity, mode)


def prime_window_limit(y: float, c: float, parity: int, tol: float = 1e-10) -> complex:
    """Limit of the geometric-window average: int_1^c of cos (or -i sin)."""
    _check_parity(parity)
    if c <= 1:
        raise ValueError("c must exceed 1")
    if parity == 1:
        val = adaptive_simpson(lambda x: math.cos(2 * math.pi * y / x), 1.0, c, tol)
        return complex(val)
    val = adaptive_simpson(lambda x: math.sin(2 * math.pi * y / x), 1.0, c, tol)
    return complex(0.0, -val)


def prime_window_limit_short(y: float, parity: int) -> complex:
    """Limit of the short-window average: cos(2 pi y), resp. -i sin(2 pi y)."""
    _check_parity(parity)
    if parity == 1:
        return complex(math.cos(2 * math.pi * y))
    return complex(0.0, -math.sin(2 * math.pi * y))


# ---------------------------------------------------------------------------
# General conductors, N != 2 mod 4
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompositeWindowSums:
    """Primitive-family sum, imprimitive correction, and their combination.

    In closed mode only the combined sum is available (there is no
    closed form for the primitive part alone), so the first two fields
    are None.
    """

    primitive_sum: complex | None
    imprimitive_sum: complex | None
    combined_sum: complex


def _conjugate_permutation(group: characters.CharacterGroup) -> np.ndarray:
    """perm with tau(conj(chi_j)) = gauss_sums_all()[perm[j]]."""
    if not group.orders:
        return np.zeros(1, dtype=np.int64)
    lin = np.arange(group.phi, dtype=np.int64).reshape(group.orders)
    for axis, o in enumerate(group.orders):
        order = np.concatenate(([0], np.arange(o - 1, 0, -1)))
        lin = np.take(lin, order, axis=axis)
    return lin.reshape(-1)


def composite_window_sums(
    y: float, window: Window, parity: int, mode: str = "closed"
) -> CompositeWindowSums:
    """Window averages over all conductors N != 2 mod 4.

    brute: primitive_sum = pref * sum_N sum_{D+-} chi(p)/tau(chi) and
    imprimitive_sum = pref * sum_N (1/N) sum_{I+-} tau(conj(chi)) chi(p),
    combined = primitive +- imprimitive.  closed: combined only, from
    the exact telescoped form (see module docstring).
    """
    _check_mode(mode)
    _check_parity(parity)
    lo, hi = window.conductor_range()
    p = prime_ceiling(y, window.X)
    pref = window.prefactor()
    keep = [N for N in range(lo, hi + 1) if N % 4 != 2]

    if mode == "closed":
        ns = np.array(keep, dtype=np.int64)
        coprime = np.array([gcd(p, int(N)) == 1 for N in ns])
        phi_ratio = arith.totient_ratio_range(lo, hi)[ns - lo]
        angles = 2 * np.pi * p / ns
        if parity == 1:
            mu = arith.mobius_range(lo, hi)[ns - lo].astype(np.float64)
            vals = -mu / ns + phi_ratio * np.cos(angles)
            total = math.fsum(vals[coprime])
            return CompositeWindowSums(None, None, complex(pref * total))
        vals = phi_ratio * np.sin(angles)
        total = math.fsum(vals[coprime])
        return CompositeWindowSums(None, None, complex(0.0, -pref * total))

    if hi > _BRUTE_WINDOW_BOUND:
        raise ValueError("brute mode is bounded to desk-scale windows")
    fam_d = "D+" if parity == 1 else "D-"
    fam_i = "I+" if parity == 1 else "I-"
    q_terms, e_terms = [], []
    for N in keep:
        g = characters.CharacterGroup(N)
        tau = g.gauss_sums_all()
        tau_bar = tau[_conjugate_permutation(g)]
        vals = g.values_at(p)
        dmask = g.family_mask(fam_d)
        imask = g.family_mask(fam_i)
        q_terms.append(np.sum(vals[dmask] / tau[dmask]) if dmask.any() else 0j)
        e_terms.append(
            np.sum(tau_bar[imask] * vals[imask]) / N if imask.any() else 0j
        )
    q_sum = pref * fsum_complex(q_terms)
    e_sum = pref * fsum_complex(e_terms)
    return CompositeWindowSums(q_sum, e_sum, q_sum + parity * e_sum)


def composite_window_limit(
    y: float, parity: int, c: float | None = None, tol: float = 1e-10
) -> complex:
    """(5/pi^2) times the corresponding prime-window limit."""
    if c is None:
        return FIVE_OVER_PI2 * prime_window_limit_short(y, parity)
    return FIVE_OVER_PI2 * prime_window_limit(y, c, parity, tol)


# ---------------------------------------------------------------------------
# Special conductor set S: primes and squarefull numbers (N != 2 mod 4)
# ---------------------------------------------------------------------------

def special_conductors_in(lo: int, hi: int) -> list[int]:
    """Members of S = {prime or squarefull, N != 2 mod 4} in [lo, hi]."""
    members = set(arith.primes_in_interval(lo, hi))
    members.update(arith.squarefull_in_range(lo, hi))
    return sorted(N for N in members if N % 4 != 2)


def special_window_average(
    y: float, X: int, delta: float, parity: int, mode: str = "closed"
) -> complex:
    """Normalized short-window average over the special conductor set S.

    The imprimitive Gauss sums vanish identically on S, so for
    gcd(p, N) = 1 the family sum collapses to the same closed form as
    the prime case, with mu(N) = 0 for the squarefull members.  The
    normalization is the window increment of f(X) = sum phi(N)/N over S.
    """
    _check_mode(mode)
    _check_parity(parity)
    window = ShortWindow(X, delta)
    lo, hi = window.conductor_range()
    members = special_conductors_in(lo, hi)
    if not members:
        raise EmptySWindowError(
            f"no prime or squarefull conductor in [{lo}, {hi}]"
        )
    p = prime_ceiling(y, X)
    denom = math.fsum(arith.euler_phi(N) / N for N in members)

    if mode == "brute":
        if hi > _BRUTE_WINDOW_BOUND:
            raise ValueError("brute mode is bounded to desk-scale windows")
        family = "D+" if parity == 1 else "D-"
        num = fsum_complex(
            characters.normalized_character_sum(N, p, family) for N in members
        )
        return num / denom

    terms = []
    for N in members:
        if gcd(p, N) != 1:
            terms.append(0j)
            continue
        phi_ratio = arith.euler_phi(N) / N
        angle = 2 * math.pi * p / N
        if parity == 1:
            mu = arith.mobius(N)  # -1 on the primes in S, 0 on squarefull
            terms.append(complex(-mu / N + phi_ratio * math.cos(angle)))
        else:
            terms.append(complex(0.0, -phi_ratio * math.sin(angle)))
    return fsum_complex(terms) / denom


# ---------------------------------------------------------------------------
# Dyadic raw sums (figure data over a prime axis)
# ---------------------------------------------------------------------------

def fundamental_discriminants_in(lo: int, hi: int) -> np.ndarray:
    """All fundamental discriminants D with lo <= |D| <= hi, sorted by |D|.

    These index the primitive quadratic characters: chi_D = (D/.) has
    conductor |D|, is even for D > 0 and odd for D < 0.  Odd |D|:
    D = +-n, n squarefree, with the sign making D = 1 mod 4.  |D| = 4m:
    D = 4m for squarefree m = 2, 3 mod 4 and D = -4m for squarefree
    m = 1, 2 mod 4.
    """
    lo = max(lo, 1)
    if hi < lo:
        return np.zeros(0, dtype=np.int64)
    n = np.arange(lo, hi + 1, dtype=np.int64)
    sf = arith.squarefree_mask_range(lo, hi)
    odd = (n % 2 == 1) & sf
    parts = [np.where(n % 4 == 1, n, -n)[odd]]
    m_lo, m_hi = (lo + 3) // 4, hi // 4
    if 1 <= m_lo <= m_hi:
        m = np.arange(m_lo, m_hi + 1, dtype=np.int64)
        msf = arith.squarefree_mask_range(m_lo, m_hi)
        parts.append(4 * m[msf & ((m % 4 == 2) | (m % 4 == 3))])
        parts.append(-4 * m[msf & ((m % 4 == 1) | (m % 4 == 2))])
    discs = np.concatenate(parts)
    discs = discs[np.abs(discs) > 1]  # D = 1 is the principal character, not in Q+
    return discs[np.argsort(np.abs(discs), kind="stable")]


def _legendre_table(p: int) -> np.ndarray:
    """(b/p) for b = 0..p-1 as int8 (p an odd prime)."""
    table = np.full(p, -1, dtype=np.int8)
    table[0] = 0
    table[(np.arange(1, (p - 1) // 2 + 1, dtype=np.int64) ** 2) % p] = 1
    return table


def dyadic_raw_sum(
    X: int,
    parity: int,
    family: str,
    p_max: int,
    normalization: str = "none",
    threads: int | None = None,
) -> list[tuple[int, complex]]:
    """Per-prime values of the dyadic conductor sum over [X, 2X).

    family 'Q': quadratic primitive characters, evaluated through the
    fundamental-discriminant form with per-prime quadratic-residue
    tables (fast path, X up to 2^17).  family 'D': full primitive
    families by enumeration (X up to 2^10).  normalization 'none' or
    'inv_X'.
    """
    _check_parity(parity)
    if family not in ("Q", "D"):
        raise ValueError("family must be 'Q' or 'D'")
    if normalization not in ("none", "inv_X"):
        raise ValueError("normalization must be 'none' or 'inv_X'")
    primes = arith.primes_in_interval(2, p_max)
    scale = 1.0 / X if normalization == "inv_X" else 1.0

    if family == "Q":
        if X > 2**17:
            raise ValueError("Q-family fast path bounded to X <= 2^17")
        discs = fundamental_discriminants_in(X, 2 * X - 1)
        discs = discs[discs > 0] if parity == 1 else discs[discs < 0]
        weights = 1.0 / np.sqrt(np.abs(discs).astype(np.float64))
        blocks = _blocked(primes, 512)
        work = lambda blk: _quadratic_dyadic_values(discs, weights, blk, parity)
        values = [v for blk_vals in _block_map(work, blocks, threads) for v in blk_vals]
        return [(p, scale * v) for p, v in zip(primes, values)]

    if X > 2**10:
        raise ValueError("D-family enumeration bounded to X <= 2^10")
    fam = "D+" if parity == 1 else "D-"
    p_arr = np.array(primes, dtype=np.int64)

    def conductor_block(ns: list[int]) -> np.ndarray:
        acc = np.zeros(len(primes), dtype=complex)
        for N in ns:
            g = characters.CharacterGroup(N)
            mask = g.family_mask(fam)
            if not mask.any():
                continue
            tau = g.gauss_sums_all()
            vals = g.values_at_many(p_arr)
            acc += (1.0 / tau[mask]) @ vals[mask]
        return acc

    blocks = _blocked(list(range(X, 2 * X)), 64)
    acc = np.zeros(len(primes), dtype=complex)
    for part in _block_map(conductor_block, blocks, threads):
        acc += part  # fixed block order keeps the reduction deterministic
    return [(p, scale * complex(v)) for p, v in zip(primes, acc)]


def _blocked(items: list, size: int) -> list[list]:
    return [items[i : i + size] for i in range(0, len(items), size)]


def _block_map(fn, blocks: list, threads: int | None) -> list:
    if threads is None or threads <= 1 or len(blocks) <= 1:
        return [fn(b) for b in blocks]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, blocks))


def _quadratic_dyadic_values(
    discs: np.ndarray, weights: np.ndarray, primes: list[int], parity: int
) -> list[complex]:
    """sum_D (D/p)/tau(chi_D) for each prime, over signed discriminants."""
    rot = 1.0 if parity == 1 else -1j  # 1/tau = 1/sqrt(N) or -i/sqrt(N)
    out = []
    for p in primes:
        if p == 2:
            dm8 = np.mod(discs, 8)  # (D/2) depends on D mod 8 only
            sym = np.zeros(len(discs), dtype=np.float64)
            sym[(dm8 == 1) | (dm8 == 7)] = 1.0
            sym[(dm8 == 3) | (dm8 == 5)] = -1.0
        else:
            table = _legendre_table(p)
            sym = table[np.mod(discs, p)].astype(np.float64)
        out.append(rot * float(np.dot(sym, weights)))
    return out
