import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qshape.lattice import (
    area_S,
    boundary_length_bound,
    count_R_bruteforce,
    count_R_exact,
    count_S_exact,
    lipschitz_check,
    predicted_count_R,
    slice_threshold,
    sqrt_error_constant,
)
from qshape.verify import DEFAULT_M_GRID, DEFAULT_R_GRID


def wedge_oracle(M, R):
    """Plain double loop over the wedge."""
    n = 0
    for c in range(1, int(M) + 1):
        for a in range(c, int(M) + 1):
            if a * c < M and Fraction(a, c) <= Fraction(R):
                n += 1
    return n


@pytest.mark.parametrize("M,R,expected", [
    (1, 5, 0.0), (4, 2, 2 * math.log(2) - 0.5), (3, 3, 1.5 * math.log(3) - 1),
])
def test_area_examples(M, R, expected):
    assert area_S(M, R) == pytest.approx(expected, abs=1e-12)


def test_area_branches_agree_on_diagonal():
    for R in (1.0, 2.5, 7.0):
        assert area_S(R, R) == pytest.approx(R / 2 * math.log(R) - (R - 1) / 2)
    assert area_S(3, 3) == pytest.approx(0.64792, abs=1e-5)


@pytest.mark.parametrize("M,R,expected", [
    (1, 1, 0.0), (4, 2, math.sqrt(2) + math.sqrt(5) + 1), (9, 1, 4 * math.sqrt(2)),
])
def test_boundary_bound_examples(M, R, expected):
    assert boundary_length_bound(M, R) == pytest.approx(expected)


@pytest.mark.parametrize("M,R,expected", [(1, 10, 0), (4, 2, 2), (10, 3, 7)])
def test_count_S_examples(M, R, expected):
    assert count_S_exact(M, R) == expected == wedge_oracle(M, R)


@given(st.integers(1, 400), st.fractions(1, 12, max_denominator=7))
def test_count_S_matches_double_loop(M, R):
    assert count_S_exact(M, R) == wedge_oracle(M, R)


def test_count_S_product_boundary_is_strict():
    # (2, 3) has product 6 exactly on the boundary ac = M
    assert count_S_exact(6, 2) == wedge_oracle(6, 2)
    assert count_S_exact(Fraction(61, 10), 2) == count_S_exact(6, 2) + 1


@pytest.mark.parametrize("M,R", [(4, 2), (1, 1)])
def test_lipschitz_examples(M, R):
    assert lipschitz_check(M, R)


def test_lipschitz_grid():
    assert all(lipschitz_check(M, R) for M in DEFAULT_M_GRID for R in DEFAULT_R_GRID)


def test_count_R_examples():
    assert count_R_exact(1, 2, 2) == 0
    assert count_R_exact(4, 2, 1) == 2
    assert count_R_exact(4, 2, 2) == count_S_exact(4, 2) + count_S_exact(4 / 2 ** (2 / 3), 2)


@pytest.mark.parametrize("N", [10, 97, 1000, 5000])
@pytest.mark.parametrize("R1,R2", [(1, 1), (2, 3), (4, 3), (Fraction(7, 2), 5), (10, 8)])
def test_count_R_decomposition(N, R1, R2):
    assert count_R_exact(N, R1, R2) == count_R_bruteforce(N, R1, R2)


@pytest.mark.slow
def test_count_R_decomposition_large():
    for N in (20000, 10**5):
        assert count_R_exact(N, 4, 3) == count_R_bruteforce(N, 4, 3)


def test_slice_threshold_exact():
    # t^3 b^2 < N^3 at the edge: N = 6, b = 1 gives t = 5 strictly, 6 otherwise
    assert slice_threshold(6, 1) == 5
    assert slice_threshold(6, 1, strict=False) == 6
    for N in (10, 123, 10**4):
        for b in (1, 2, 3, 7):
            t = slice_threshold(N, b)
            assert t**3 * b * b < N**3 <= (t + 1) ** 3 * b * b


def test_predicted_examples():
    assert predicted_count_R(50, 1, 3) == 0
    assert predicted_count_R(100, math.e, 1) == pytest.approx(50)
    want = 5e5 * math.log(4) * (1 + 2 ** (-2 / 3) + 3 ** (-2 / 3))
    assert predicted_count_R(1e6, 4, 3) == pytest.approx(want)


def test_sqrt_error_bounded():
    C = sqrt_error_constant(4, 3, 1e3)
    for N in (10**3, 10**4, 10**5, 10**6):
        err = abs(count_R_exact(N, 4, 3) - predicted_count_R(N, 4, 3)) / math.sqrt(N)
        assert err <= C
