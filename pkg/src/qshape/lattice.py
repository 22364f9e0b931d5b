"""Integer points in the hyperbolic wedge S(M, R) and the slab R(N, R1, R2).

S(M, R) = {(a, c) : a >= c >= 1, ac < M, a/c <= R} and
R(N, R1, R2) = {(a, b, c) : a b^(2/3) c < N, 1 <= a/c <= R1, 1 <= b <= R2}.
All counts use exact integer thresholds so that boundary points are decided
without floating error.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .arith import floor_mul, iroot


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def area_S(M: float, R: float) -> float:
    if M >= R:
        return M / 2 * math.log(R) - (R - 1) / 2
    return M / 2 * math.log(M) - (M - 1) / 2


def boundary_length_bound(M: float, R: float) -> float:
    return (math.sqrt(2) + math.sqrt(1 + R * R)) * (math.sqrt(M) - 1) + (R - 1)


def _strict_product_bound(M: Fraction) -> int:
    """Largest integer t with t < M."""
    return math.ceil(M) - 1


def _count_wedge(T: int, R: Fraction) -> int:
    """#{(a, c) : c <= a <= R c, a c <= T}."""
    if T < 1:
        return 0
    cs = np.arange(1, math.isqrt(T) + 1, dtype=np.int64)
    hi = np.minimum(floor_mul(R, cs), T // cs)
    return int(np.maximum(hi - cs + 1, 0).sum())


def count_S_exact(M, R) -> int:
    """Integer pairs with a >= c >= 1, ac < M and a/c <= R."""
    return _count_wedge(_strict_product_bound(_frac(M)), _frac(R))


def lipschitz_check(M, R) -> bool:
    err = abs(count_S_exact(M, R) - area_S(float(M), float(R)))
    return err <= 4 * (boundary_length_bound(float(M), float(R)) + 1)


def slice_threshold(N, b: int, strict: bool = True) -> int:
    """Largest t with t^3 b^2 < N^3 (or <= N^3 when not strict).

    This is the exact form of ``a c < N / b^(2/3)``.
    """
    N = _frac(N)
    q = N**3 / (b * b)
    if strict:
        fl = math.ceil(q) - 1
    else:
        fl = math.floor(q)
    return iroot(fl, 3) if fl > 0 else 0


def count_R_exact(N, R1, R2) -> int:
    """#R(N, R1, R2) over Z^3, summed over the disjoint b-slices."""
    R1 = _frac(R1)
    return sum(_count_wedge(slice_threshold(N, b), R1) for b in range(1, math.floor(R2) + 1))


def count_R_bruteforce(N, R1, R2) -> int:
    """Direct triple loop; the oracle for :func:`count_R_exact`."""
    N, R1 = _frac(N), _frac(R1)
    N3 = N**3
    total = 0
    b = 1
    while b <= R2 and b * b < N3:
        c = 1
        while c**6 * b * b < N3:  # a >= c forces c^6 b^2 <= (ac)^3 b^2
            a = c
            while a <= R1 * c and (a * c) ** 3 * b * b < N3:
                total += 1
                a += 1
            c += 1
        b += 1
    return total


def predicted_count_R(N: float, R1: float, R2: float) -> float:
    s = math.fsum(n ** (-2.0 / 3.0) for n in range(1, math.floor(R2) + 1))
    return N / 2 * math.log(R1) * s


def sqrt_error_constant(R1: float, R2: float, N_min: float) -> float:
    """A bound C with |count_R_exact - predicted_count_R| <= C sqrt(N) for N >= N_min.

    Per slice the count is within 4(L + 1) of the area, L the boundary bound,
    and the area differs from (M/2) log R1 by at most (R1 - 1)/2 + (M/2) log R1
    when M < R1. Summing over b and dividing by sqrt(N) gives the constant.
    """
    k = math.sqrt(2) + math.sqrt(1 + R1 * R1)
    B = math.floor(R2)
    lead = 4 * k * math.fsum(b ** (-1.0 / 3.0) for b in range(1, B + 1))
    per_slice = 4 * (R1 + 1) + (R1 - 1) / 2 + R1 / 2 * math.log(R1)
    return lead + B * per_slice / math.sqrt(N_min)
