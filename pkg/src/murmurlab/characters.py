"""Dirichlet character groups: construction, evaluation, Gauss sums, families.

The dual group of (Z/NZ)* is represented through its CRT decomposition
into cyclic components (primitive roots for odd prime powers; the pair
-1, 5 for 2^k with k >= 3).  A character is indexed by one exponent per
component, and every value is carried as an exact integer pair (t, L)
meaning exp(2*pi*i*t/L), L the group exponent.  Roots of unity are
never accumulated by repeated multiplication, which keeps test values
bit-reproducible.

Conductors are computed by the definition scan: the least d | N such
that chi is trivial on every unit congruent to 1 mod d.  (Divisors
d = 2 or d = 2 mod 4 are skipped: no primitive character exists there,
so they can never be conductors.)  Families:

    D+ / D-   primitive non-principal, even / odd
    I+ / I-   imprimitive non-principal, even / odd
    Q+ / Q-   quadratic subfamily of D+ / D-

Groups are immutable after construction; evaluation is pure, so many
groups (one per conductor N) can be built and used in parallel.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from math import gcd

import numpy as np

from . import arith

CharacterIndex = tuple[int, ...]

FAMILIES = ("D+", "D-", "I+", "I-", "Q+", "Q-")

#: largest modulus for which the brute-force dual group may be built
BRUTE_FORCE_BOUND = 10**5

#: full theta matrices are cached only below this group order
_THETA_CACHE_PHI = 2048

#: column block size for on-the-fly theta products
_CHUNK = 1 << 18


class _Component:
    """One cyclic factor of (Z/NZ)*: generator, order, discrete logs."""

    __slots__ = ("modulus", "generator", "order", "dlog")

    def __init__(self, modulus: int, generator: int, order: int, dlog: np.ndarray):
        self.modulus = modulus
        self.generator = generator
        self.order = order
        dlog.setflags(write=False)
        self.dlog = dlog


def _primitive_root_prime_power(p: int, e: int) -> int:
    """Smallest primitive root mod p, adjusted to work for every p^e (p odd)."""
    fac = [q for q, _ in arith.factorize(p - 1)]
    g = 2
    while True:
        if all(pow(g, (p - 1) // q, p) != 1 for q in fac):
            break
        g += 1
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _dlog_table(modulus: int, generator: int, order: int) -> np.ndarray:
    table = np.full(modulus, -1, dtype=np.int64)
    x = 1
    for k in range(order):
        table[x] = k
        x = x * generator % modulus
    return table


def _components_for(N: int) -> list[_Component]:
    comps: list[_Component] = []
    for p, e in arith.factorize(N):
        q = p**e
        if p == 2:
            if e == 1:
                continue
            if e == 2:
                comps.append(_Component(4, 3, 2, _dlog_table(4, 3, 2)))
                continue
            # (Z/2^e)* = C2 x C_{2^(e-2)}, generated by -1 and 5
            half = q // 4
            sign = np.full(q, -1, dtype=np.int64)
            five = np.full(q, -1, dtype=np.int64)
            x = 1
            for k in range(half):
                sign[x] = 0
                five[x] = k
                sign[q - x] = 1
                five[q - x] = k
                x = x * 5 % q
            comps.append(_Component(q, q - 1, 2, sign))
            comps.append(_Component(q, 5, half, five))
        else:
            g = _primitive_root_prime_power(p, e)
            order = q // p * (p - 1)
            comps.append(_Component(q, g, order, _dlog_table(q, g, order)))
    return comps


class CharacterGroup:
    """The full dual group of (Z/NZ)*, with exact root-of-unity arithmetic."""

    def __init__(self, N: int, brute_force_bound: int = BRUTE_FORCE_BOUND):
        if N < 1:
            raise ValueError("modulus must be >= 1")
        if N > brute_force_bound:
            raise ValueError(
                f"N = {N} exceeds the brute-force bound {brute_force_bound}; "
                "use the closed-form paths for large conductors"
            )
        self.N = N
        self.components = _components_for(N)
        self.orders = tuple(c.order for c in self.components)
        self.L = math.lcm(*self.orders) if self.orders else 1
        self._weights = tuple(self.L // o for o in self.orders)

        units = [a for a in range(N) if gcd(a, N) == 1] if N > 1 else [0]
        self.units = np.array(units, dtype=np.int64)
        self.phi = len(units)
        pos = np.full(N, -1, dtype=np.int64)
        pos[self.units] = np.arange(self.phi)
        self.unit_pos = pos
        r = len(self.components)
        exps = np.empty((r, self.phi), dtype=np.int64)
        for i, c in enumerate(self.components):
            exps[i] = c.dlog[self.units % c.modulus]
        self.unit_exps = exps
        for a in (self.units, self.unit_pos, self.unit_exps):
            a.setflags(write=False)
        self._J: np.ndarray | None = None
        self._theta: np.ndarray | None = None
        self._tau_all: np.ndarray | None = None
        self._conductors: np.ndarray | None = None

    # -- indexing ---------------------------------------------------------

    def characters(self) -> list[CharacterIndex]:
        """All character indices, principal first (mixed-radix order)."""
        return list(itertools.product(*(range(o) for o in self.orders)))

    @property
    def principal(self) -> CharacterIndex:
        return tuple(0 for _ in self.orders)

    def conjugate_index(self, chi: CharacterIndex) -> CharacterIndex:
        return tuple((-j) % o for j, o in zip(chi, self.orders))

    def character_order(self, chi: CharacterIndex) -> int:
        if not chi:
            return 1
        return math.lcm(*(o // gcd(o, j) for j, o in zip(chi, self.orders)))

    def _weighted_index_matrix(self) -> np.ndarray:
        """(phi, r) matrix of j_i * (L / o_i), rows in characters() order."""
        if self._J is None:
            if not self.orders:
                J = np.zeros((1, 0), dtype=np.int64)
            else:
                grids = np.meshgrid(
                    *(np.arange(o, dtype=np.int64) for o in self.orders),
                    indexing="ij",
                )
                J = np.stack([g.reshape(-1) for g in grids], axis=1)
                J *= np.array(self._weights, dtype=np.int64)
            J.setflags(write=False)
            self._J = J
        return self._J

    # -- pointwise evaluation ----------------------------------------------

    def value_exponent(self, chi: CharacterIndex, a: int) -> int | None:
        """t with chi(a) = exp(2*pi*i*t/L), or None when gcd(a, N) > 1."""
        if self.N == 1:
            return 0
        r = self.unit_pos[a % self.N]
        if r < 0:
            return None
        t = 0
        for j, w, e in zip(chi, self._weights, self.unit_exps[:, r]):
            t += j * w * int(e)
        return t % self.L

    def evaluate(self, chi: CharacterIndex, a: int) -> complex:
        t = self.value_exponent(chi, a)
        if t is None:
            return 0j
        return complex(np.exp(2j * np.pi * (t / self.L)))

    def parity(self, chi: CharacterIndex) -> int:
        """chi(-1): +1 for even characters, -1 for odd."""
        t = self.value_exponent(chi, (self.N - 1) % self.N)
        return 1 if t == 0 else -1

    def conductor(self, chi: CharacterIndex) -> int:
        """Least d | N with chi trivial on all units a = 1 mod d."""
        if self.N == 1 or all(j == 0 for j in chi):
            return 1
        for d in _divisors(self.N):
            if d == 1 or d == 2 or d % 4 == 2:
                continue
            ok = True
            for a in self.units[self.units % d == 1]:
                if self.value_exponent(chi, int(a)) != 0:
                    ok = False
                    break
            if ok:
                return d
        raise AssertionError("conductor scan cannot fail at d = N")

    def is_primitive(self, chi: CharacterIndex) -> bool:
        return self.conductor(chi) == self.N

    # -- Gauss sums ---------------------------------------------------------

    def gauss_sum(self, chi: CharacterIndex) -> complex:
        """tau(chi) by the full O(N) sum with compensated summation."""
        L, N = self.L, self.N
        re, im = [], []
        for r in range(self.phi):
            t = 0
            for j, w, e in zip(chi, self._weights, self.unit_exps[:, r]):
                t += j * w * int(e)
            b = int(self.units[r]) if N > 1 else 1
            phase = 2 * np.pi * ((t % L) / L + b / N)
            re.append(math.cos(phase))
            im.append(math.sin(phase))
        return complex(math.fsum(re), math.fsum(im))

    # -- vectorized whole-group machinery ------------------------------------

    def theta_matrix(self) -> np.ndarray:
        """Integer matrix T with chi_j(unit_u) = exp(2*pi*i*T[j,u]/L)."""
        if self._theta is not None:
            return self._theta
        theta = self._theta_columns(np.arange(self.phi))
        if self.phi <= _THETA_CACHE_PHI:
            theta.setflags(write=False)
            self._theta = theta
        return theta

    def _theta_columns(self, cols: np.ndarray) -> np.ndarray:
        J = self._weighted_index_matrix()
        if J.shape[1] == 0:
            return np.zeros((1, len(cols)), dtype=np.int64)
        return J @ self.unit_exps[:, cols] % self.L

    def values_at(self, a: int) -> np.ndarray:
        """chi(a) for every character at once (zeros on non-units)."""
        if self.N == 1:
            return np.ones(1, dtype=complex)
        r = self.unit_pos[a % self.N]
        if r < 0:
            return np.zeros(self.phi, dtype=complex)
        t = self._theta_columns(np.array([r]))[:, 0]
        return np.exp(2j * np.pi * (t / self.L))

    def values_at_many(self, a: np.ndarray) -> np.ndarray:
        """Matrix chi_j(a_k), shape (phi(N), len(a))."""
        res = np.asarray(a) % self.N
        pos = self.unit_pos[res]
        out = np.zeros((self.phi, len(res)), dtype=complex)
        ok = pos >= 0
        if ok.any():
            t = self._theta_columns(pos[ok])
            out[:, ok] = np.exp(2j * np.pi * (t / self.L))
        return out

    def gauss_sums_all(self) -> np.ndarray:
        """tau(chi) for every character, characters() order."""
        if self._tau_all is None:
            b = self.units if self.N > 1 else np.array([1])
            phase = self.theta_matrix() / self.L + b[None, :] / self.N
            tau = np.exp(2j * np.pi * phase).sum(axis=1)
            tau.setflags(write=False)
            self._tau_all = tau
        return self._tau_all

    def parities_all(self) -> np.ndarray:
        """chi(-1) for every character as +-1 ints."""
        r = self.unit_pos[(self.N - 1) % self.N]
        col = self._theta_columns(np.array([r]))[:, 0]
        return np.where(col == 0, 1, -1)

    def conductors_all(self) -> np.ndarray:
        """Conductor of every character via the chunked definition scan."""
        if self._conductors is not None:
            return self._conductors
        cond = np.zeros(self.phi, dtype=np.int64)
        cond[0] = 1  # principal: trivial on every unit
        for d in _divisors(self.N):
            if d == 1 or d == 2 or d % 4 == 2:
                continue
            open_rows = np.flatnonzero(cond == 0)
            if open_rows.size == 0:
                break
            cols = np.flatnonzero(self.units % d == 1)
            trivial = np.ones(open_rows.size, dtype=bool)
            J = self._weighted_index_matrix()[open_rows]
            chunk = max(1, _CHUNK // max(1, open_rows.size))
            for start in range(0, cols.size, chunk):
                blk = cols[start : start + chunk]
                t = J @ self.unit_exps[:, blk] % self.L
                trivial &= ~(t != 0).any(axis=1)
                if not trivial.any():
                    break
            cond[open_rows[trivial]] = d
        assert (cond > 0).all(), "conductor scan left unresolved characters"
        cond.setflags(write=False)
        self._conductors = cond
        return self._conductors

    def orders_all(self) -> np.ndarray:
        out = np.empty(self.phi, dtype=np.int64)
        for i, chi in enumerate(self.characters()):
            out[i] = self.character_order(chi)
        return out

    def family_mask(self, family: str) -> np.ndarray:
        """Boolean membership mask over characters() for one family."""
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
        primitive = self.conductors_all() == self.N
        parity = self.parities_all() == (1 if family[1] == "+" else -1)
        principal = np.zeros(primitive.shape[0], dtype=bool)
        principal[0] = True  # characters() puts the all-zero index first
        kind = family[0]
        if kind == "D":
            return primitive & parity & ~principal
        if kind == "I":
            return ~primitive & parity & ~principal
        quadratic = self.orders_all() <= 2
        return primitive & parity & quadratic & ~principal

    def enumerate_family(self, family: str) -> list[CharacterIndex]:
        chars = self.characters()
        return [chars[i] for i in np.flatnonzero(self.family_mask(family))]


@lru_cache(maxsize=None)
def _divisors(N: int) -> tuple[int, ...]:
    divs = [1]
    for p, e in arith.factorize(N):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return tuple(sorted(divs))


@lru_cache(maxsize=256)
def character_group(N: int) -> CharacterGroup:
    """Cached constructor for the dual group mod N (N <= brute-force bound)."""
    return CharacterGroup(N)


# ---------------------------------------------------------------------------
# Derived quantities and family sums
# ---------------------------------------------------------------------------

def count_primitive(N: int) -> int:
    """Number of primitive characters mod N: sum_{d | N} mu(N/d) phi(d)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return sum(arith.mobius(N // d) * arith.euler_phi(d) for d in _divisors(N))


def imprimitive_gauss_sum(
    group: CharacterGroup,
    chi: CharacterIndex,
    inducing_group: CharacterGroup,
    chi1: CharacterIndex,
) -> complex:
    """tau(conj(chi)) for chi mod N induced by primitive chi1 mod N1.

    Uses tau(conj(chi)) = mu(N/N1) * conj(chi1(N/N1)) * tau(conj(chi1)),
    bypassing the O(N) sum.  Rejects calls where N1 does not divide N,
    chi1 is not primitive, or chi is not actually induced by chi1.
    """
    N, N1 = group.N, inducing_group.N
    if N % N1 != 0:
        raise ValueError(f"inducing modulus {N1} does not divide {N}")
    if inducing_group.conductor(chi1) != N1:
        raise ValueError("inducing character is not primitive")
    for a in group.units:
        a = int(a) if group.N > 1 else 1
        t = group.value_exponent(chi, a)
        t1 = inducing_group.value_exponent(chi1, a)
        if t1 is None or t * inducing_group.L != t1 * group.L:
            raise ValueError("character is not induced by the given inducing character")
    chi1_bar = inducing_group.conjugate_index(chi1)
    return (
        arith.mobius(N // N1)
        * np.conj(inducing_group.evaluate(chi1, N // N1))
        * inducing_group.gauss_sum(chi1_bar)
    )


def _crt_unit(g_val: int, q: int, d: int) -> int:
    """Residue mod d that is g_val mod q and 1 mod d/q (q the full prime power)."""
    m = d // q
    if m == 1:
        return g_val % d
    inv = pow(m, -1, q)
    return (1 + m * (((g_val - 1) * inv) % q)) % d


def restrict_to_conductor(
    group: CharacterGroup, chi: CharacterIndex
) -> tuple[CharacterGroup, CharacterIndex]:
    """The primitive character inducing chi, on the group mod its conductor.

    The exponent on each cyclic component of the subgroup is read off
    from chi's value at a unit lift of that component's CRT generator.
    """
    d = group.conductor(chi)
    sub = character_group(d)
    exps = []
    for comp in sub.components:
        w = _crt_unit(comp.generator, comp.modulus, d)
        lift = w
        while gcd(lift, group.N) != 1:
            lift += d
        t = group.value_exponent(chi, lift)
        num = t * comp.order
        if num % group.L != 0:
            raise AssertionError("restriction produced a non-integral exponent")
        exps.append((num // group.L) % comp.order)
    return sub, tuple(exps)


def twisted_quadratic_gauss_sum(k: int, p: int) -> tuple[complex, complex]:
    """Quadratic Gauss sum twisted by e(bk/p), and its normalized partner.

    Returns (tau_k, G_k) with tau_k = sum_{b mod p} (b/p) e(2*pi*i*b*k/p)
    by direct summation and G_k = ((1-i)/2 + (-1/p)(1+i)/2) * tau_k.
    """
    if p % 2 == 0 or not arith.is_prime_u64(p):
        raise ValueError("p must be an odd prime")
    b = np.arange(1, p, dtype=np.int64)
    legendre = np.full(p, -1, dtype=np.int64)
    legendre[0] = 0
    legendre[(np.arange(1, (p - 1) // 2 + 1, dtype=np.int64) ** 2) % p] = 1
    phases = np.exp(2j * np.pi * ((b * (k % p)) % p) / p)
    tau_k = complex(np.sum(legendre[b] * phases))
    eps = arith.kronecker_symbol(-1, p)
    g_k = ((1 - 1j) / 2 + eps * (1 + 1j) / 2) * tau_k
    return tau_k, g_k


def normalized_character_sum(N: int, p: int, family: str) -> complex:
    """sum over the family of chi(p)/tau(chi), by direct enumeration.

    The slow oracle path: full dual group, direct Gauss sums.  Empty
    families give 0.
    """
    g = character_group(N)
    mask = g.family_mask(family)
    if not mask.any():
        return 0j
    vals = g.values_at(p)
    tau = g.gauss_sums_all()
    return complex(np.sum(vals[mask] / tau[mask]))


def closed_form_primitive_sum(N: int, p: int, parity: int) -> complex:
    """Closed form of sum over D+-(N) of chi(p)/tau(chi) for prime modulus N.

    Even: ((N-1)/N) cos(2*pi*p/N) + 1/N; odd: -i ((N-1)/N) sin(2*pi*p/N).
    Requires N prime and p a prime different from N.
    """
    if not arith.is_prime_u64(N):
        raise ValueError("closed form requires prime N (use the composite-window path)")
    if not arith.is_prime_u64(p) or p == N:
        raise ValueError("p must be a prime different from N")
    angle = 2 * np.pi * p / N
    if parity == 1:
        return complex((N - 1) / N * math.cos(angle) + 1 / N)
    if parity == -1:
        return complex(0.0, -(N - 1) / N * math.sin(angle))
    raise ValueError("parity must be +1 or -1")
