"""Integer arithmetic: factorization, squarefree sieves, integer roots."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

_TRIAL_LIMIT = 10**6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization {self.factors}")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factors multiply to {prod}, not {self.n}")

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def exponent(self, p: int) -> int:
        return dict(self.factors).get(p, 0)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24 with the fixed bases."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int], rng: random.Random) -> None:
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n, rng)
    _split(d, out, rng)
    _split(n // d, out, rng)


@lru_cache(maxsize=65536)
def factor(n: int) -> Factorization:
    """Complete prime factorization of ``n >= 1``.

    Trial division up to 10**6, then Pollard-Brent on the cofactor. The
    random stream is seeded from ``n`` so results and timings are repeatable.
    """
    if n < 1:
        raise ValueError(f"factor() needs a positive integer, got {n}")
    out: dict[int, int] = {}
    rest = n
    for p in (2, 3):
        while rest % p == 0:
            out[p] = out.get(p, 0) + 1
            rest //= p
    p = 5
    while p * p <= rest and p <= _TRIAL_LIMIT:
        for q in (p, p + 2):
            while rest % q == 0:
                out[q] = out.get(q, 0) + 1
                rest //= q
        p += 6
    if rest > 1:
        if p * p > rest:
            out[rest] = out.get(rest, 0) + 1
        else:
            _split(rest, out, random.Random(n))
    return Factorization(n, tuple(sorted(out.items())))


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factor(abs(n)))


def is_fourth_power_free(n: int) -> bool:
    return n != 0 and all(e < 4 for _, e in factor(abs(n)))


def fourth_power_free_part(n: int) -> int:
    """Sign-preserving representative of n modulo fourth powers."""
    r = 1
    for p, e in factor(abs(n)):
        r *= p ** (e % 4)
    return r if n > 0 else -r


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for integers n >= 0."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if n < 2:
        return n
    if n < 2**120:
        x = int(round(n ** (1.0 / k)))
    else:
        # integer Newton from above
        x = 1 << (n.bit_length() // k + 1)
        while True:
            y = ((k - 1) * x + n // x ** (k - 1)) // k
            if y >= x:
                break
            x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def floor_mul(r: Fraction, cs: np.ndarray) -> np.ndarray:
    """Exact floor(r * c) for an integer array ``cs`` and rational ``r``."""
    num, den = r.numerator, r.denominator
    cmax = int(cs.max()) if len(cs) else 0
    if abs(num) * max(cmax, 1) < 2**62:
        return (num * cs.astype(np.int64)) // den
    return np.array([(num * int(c)) // den for c in cs], dtype=np.int64)


def ceil_mul(r: Fraction, cs: np.ndarray) -> np.ndarray:
    return -floor_mul(-r, cs)


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)


class _SquarefreeCache:
    """Grow-only boolean table ``t[k] = k is squarefree``."""

    def __init__(self):
        self._table = np.zeros(1, dtype=bool)

    def __call__(self, n: int) -> np.ndarray:
        if len(self._table) <= n:
            size = max(n + 1, 2 * len(self._table))
            t = np.ones(size, dtype=bool)
            t[0] = False
            for p in primes_up_to(math.isqrt(size - 1)):
                t[p * p :: p * p] = False
            self._table = t
        return self._table


squarefree_table = _SquarefreeCache()
