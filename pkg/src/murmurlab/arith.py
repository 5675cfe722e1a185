"""Integer and multiplicative-function primitives.

Everything downstream (character groups, conductor windows, weighted
real-character sums) is built on the utilities here: segmented prime
sieving, deterministic 64-bit primality, the Mobius and Euler-phi
functions, the Kronecker symbol, and squarefree/squarefull
classification.  All functions are pure; sieve tables are immutable
after construction and safe to share across threads.

Sign conventions follow classical usage: mu(d) = mu(|d|) for d < 0,
and classification flags are computed on |n|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Witnesses proving primality for every n < 3.3 * 10^24 (covers uint64).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_UINT64_MAX = 2**64 - 1


class PrimeSieve:
    """Bit-vector sieve of Eratosthenes up to a fixed limit.

    ``is_prime_table[n]`` is True iff n is prime, 0 <= n <= limit.
    """

    def __init__(self, limit: int):
        if limit < 0:
            raise ValueError("sieve limit must be nonnegative")
        self.limit = limit
        table = np.ones(limit + 1, dtype=bool)
        table[:2] = False
        for p in range(2, math.isqrt(limit) + 1):
            if table[p]:
                table[p * p :: p] = False
        table.setflags(write=False)
        self.is_prime_table = table

    def is_prime(self, n: int) -> bool:
        if n < 0 or n > self.limit:
            raise ValueError(f"{n} outside sieve range [0, {self.limit}]")
        return bool(self.is_prime_table[n])

    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.is_prime_table)


@lru_cache(maxsize=8)
def _cached_sieve(limit: int) -> PrimeSieve:
    return PrimeSieve(limit)


def _base_primes(limit: int) -> np.ndarray:
    """Primes up to ``limit`` from a cached, geometrically grown sieve."""
    cached = 1 << max(10, (max(limit, 1) - 1).bit_length())
    sieve = _cached_sieve(cached)
    return sieve.primes()[: np.searchsorted(sieve.primes(), limit, side="right")]


def primes_in_interval(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi, ascending.

    Segmented: memory is O(hi - lo) plus a base table up to sqrt(hi),
    never O(hi).
    """
    if lo < 0 or hi < lo:
        raise ValueError("need 0 <= lo <= hi")
    if hi < 2:
        return []
    lo = max(lo, 2)
    seg = np.ones(hi - lo + 1, dtype=bool)
    for p in _base_primes(math.isqrt(hi)):
        p = int(p)
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start <= hi:
            seg[start - lo :: p] = False
    if lo <= math.isqrt(hi):
        # small segment overlapping the base range: unmark non-primes < p*p
        for n in range(lo, min(hi, math.isqrt(hi)) + 1):
            seg[n - lo] = is_prime_u64(n)
    return [int(n) for n in np.flatnonzero(seg) + lo]


def is_prime_u64(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all 64-bit integers."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime_at_or_above(x: float) -> int:
    """Smallest prime p >= x ("prime ceiling").

    Accepts any positive real.  Floating inputs within 1e-9 (relative)
    of an integer are snapped to it, so grid values like 0.3 * 400 hit
    the intended integer boundary.  Raises OverflowError rather than
    wrapping once the search leaves the 64-bit range where the
    Miller-Rabin witness set is proven.
    """
    if x > _UINT64_MAX:
        raise OverflowError("prime ceiling exceeds 64-bit range")
    if x <= 2:
        return 2
    nearest = round(x)
    if abs(x - nearest) <= 1e-9 * max(1.0, abs(x)):
        n = int(nearest)
    else:
        n = math.ceil(x)
    while True:
        if n > _UINT64_MAX:
            raise OverflowError("prime ceiling exceeds 64-bit range")
        if is_prime_u64(n):
            return n
        n += 1


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of |n| as (prime, exponent) pairs, ascending.

    Trial division by sieved primes; intended for |n| within the desk
    scales used here (conductors and window members), not cryptographic
    sizes.
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: list[tuple[int, int]] = []
    for p in _base_primes(math.isqrt(n)):
        p = int(p)
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        out.append((n, 1))
    return out


def mobius(n: int) -> int:
    """Mobius function; mu(n) = mu(|n|) for negative n, n = 0 rejected."""
    n = abs(n)
    if n == 0:
        raise ValueError("mobius undefined at 0")
    if n == 1:
        return 1
    mu = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def euler_phi(n: int) -> int:
    """Euler totient: #{1 <= a <= n : gcd(a, n) = 1}."""
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    phi = n
    for p, _ in factorize(n):
        phi -= phi // p
    return phi


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a/n), defined for all integers, not both zero.

    Extends the Jacobi symbol with (a/2) = 0, +1, -1 for a even,
    a = +-1 mod 8, a = +-3 mod 8, and (a/-1) = 1 for a >= 0, -1 for
    a < 0.
    """
    if a == 0 and n == 0:
        raise ValueError("(0/0) undefined")
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        while n % 2 == 0:
            n //= 2
            if a % 8 in (3, 5):
                result = -result
    # Jacobi (a/n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class IntegerClass:
    odd: bool
    squarefree: bool
    squarefull: bool


def classify_integer(n: int) -> IntegerClass:
    """Parity / squarefree / squarefull flags of |n|.

    Squarefull means every prime factor appears with exponent >= 2;
    1 is squarefull vacuously.
    """
    if n == 0:
        raise ValueError("classify_integer needs n != 0")
    n = abs(n)
    if n == 1:
        return IntegerClass(odd=True, squarefree=True, squarefull=True)
    factors = factorize(n)
    return IntegerClass(
        odd=n % 2 == 1,
        squarefree=all(e == 1 for _, e in factors),
        squarefull=all(e >= 2 for _, e in factors),
    )


# ---------------------------------------------------------------------------
# Segmented bulk tables (conductor windows, density constants)
# ---------------------------------------------------------------------------

def mobius_range(lo: int, hi: int) -> np.ndarray:
    """mu(n) for n in [lo, hi] as an int8 array (index n - lo)."""
    if lo < 1 or hi < lo:
        raise ValueError("need 1 <= lo <= hi")
    size = hi - lo + 1
    mu = np.ones(size, dtype=np.int64)
    rem = np.arange(lo, hi + 1, dtype=np.int64)
    for p in _base_primes(math.isqrt(hi)):
        p = int(p)
        start = ((lo + p - 1) // p) * p
        sl = slice(start - lo, size, p)
        mu[sl] = -mu[sl]
        rem[sl] //= p
        p2 = p * p
        start2 = ((lo + p2 - 1) // p2) * p2
        mu[start2 - lo :: p2] = 0
    big = (rem > 1) & (mu != 0)
    mu[big] = -mu[big]
    return mu.astype(np.int8)


def squarefree_mask_range(lo: int, hi: int) -> np.ndarray:
    """Boolean mask, True where n in [lo, hi] is squarefree."""
    if lo < 1 or hi < lo:
        raise ValueError("need 1 <= lo <= hi")
    mask = np.ones(hi - lo + 1, dtype=bool)
    for p in _base_primes(math.isqrt(hi)):
        p2 = int(p) * int(p)
        start = ((lo + p2 - 1) // p2) * p2
        if start <= hi:
            mask[start - lo :: p2] = False
    return mask


def totient_ratio_range(lo: int, hi: int) -> np.ndarray:
    """phi(n)/n for n in [lo, hi] as float64 (index n - lo)."""
    if lo < 1 or hi < lo:
        raise ValueError("need 1 <= lo <= hi")
    size = hi - lo + 1
    ratio = np.ones(size, dtype=np.float64)
    rem = np.arange(lo, hi + 1, dtype=np.int64)
    for p in _base_primes(math.isqrt(hi)):
        p = int(p)
        start = ((lo + p - 1) // p) * p
        sl = slice(start - lo, size, p)
        ratio[sl] *= 1.0 - 1.0 / p
        rem[sl] //= p
        e = p
        while e <= hi // p:
            e *= p
            start = ((lo + e - 1) // e) * e
            rem[start - lo :: e] //= p
    big = rem > 1
    ratio[big] *= 1.0 - 1.0 / rem[big]
    return ratio


def squarefull_in_range(lo: int, hi: int) -> list[int]:
    """Squarefull integers in [lo, hi] (every prime exponent >= 2).

    Uses the unique representation n = a^2 * b^3 with b squarefree.
    """
    if lo < 1 or hi < lo:
        raise ValueError("need 1 <= lo <= hi")
    out = []
    b = 1
    while b * b * b <= hi:
        if b == 1 or classify_integer(b).squarefree:
            b3 = b * b * b
            a = max(1, math.isqrt((lo + b3 - 1) // b3))
            while a * a * b3 < lo:
                a += 1
            while a * a * b3 <= hi:
                out.append(a * a * b3)
                a += 1
        b += 1
    return sorted(out)
