"""The ten acceptance criteria, each reported as one PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from qshape.census import count_C_tau
from qshape.densities import DensityTable, brute_force_A, carefree_count_formula
from qshape.fields import Type, admissible_range, pure_quartic_field
from qshape.gram import gram_perp
from qshape.lattice import count_R_exact, predicted_count_R, sqrt_error_constant
from qshape.quadratic import to_float
from qshape.reduction import in_F3, lll_gram, minkowski_reduce, normalize, shapes_equivalent, successive_minima
from qshape.verify import verify_gram, verify_lipschitz

TOL = 1e-8


def report(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def gram_checks():
    t0 = time.perf_counter()
    checks = {c.check: c for c in verify_gram(max_m=5000, numeric_max_m=2000)}
    return checks, time.perf_counter() - t0


def test_criterion_01_gram_determinant(gram_checks):
    checks, secs = gram_checks
    c = checks["gram_determinant"]
    report(1, c.passed and secs < 60,
           f"det(Gram) = |disc| for {c.observed['fields']} fields, failures {c.observed['failures']}, {secs:.1f}s")


def test_criterion_02_embedding_oracle(gram_checks):
    c = gram_checks[0]["embedding_oracle"]
    err = c.observed["max_relative_error"]
    report(2, c.passed and err <= 1e-9, f"max relative error {err:.2e} for |m| <= 2000 (tol 1e-9)")


def test_criterion_03_index_square(gram_checks):
    c = gram_checks[0]["index_square"]
    report(3, c.passed, f"-256 m'^3 / disc a perfect square for {c.observed['fields']} fields")


def test_criterion_04_torus_factorization(gram_checks):
    c = gram_checks[0]["torus_factorization"]
    report(4, c.passed, f"exact torus factorization for {c.observed['fields']} fields")


def test_criterion_05_carefree_densities():
    t0 = time.perf_counter()
    bad = [l for l in (3, 5, 7, 11, 13) if brute_force_A(l) != carefree_count_formula(l)]
    secs = time.perf_counter() - t0
    report(5, not bad and secs < 10, f"brute force = (l-1)^3 (l^3+3l^2) for l in 3..13, {secs:.2f}s")


def test_criterion_06_lipschitz():
    checks = verify_lipschitz()
    fails = [c.check for c in checks if not c.passed]
    report(6, len(checks) == 16 and not fails, f"{len(checks)} grid points, failures {fails}")


def test_criterion_07_sqrt_error():
    C = sqrt_error_constant(4, 3, 1e3)
    errs = [abs(count_R_exact(N, 4, 3) - predicted_count_R(N, 4, 3)) / math.sqrt(N)
            for N in (10**3, 10**4, 10**5, 10**6)]
    report(7, max(errs) <= C, f"|error|/sqrt(N) = {[round(e, 3) for e in errs]} <= C = {C:.2f}")


@pytest.mark.parametrize("tau", [3, 2])
def test_criterion_08_c_tau_convergence(tau):
    t0 = time.perf_counter()
    big = count_C_tau(10**7, 4, 3, tau)
    small = count_C_tau(10**5, 4, 3, tau)
    secs = time.perf_counter() - t0
    pred = big.predicted_ratio
    dev_big, dev_small = abs(big.ratio - pred), abs(small.ratio - pred)
    ok = big.relative_error <= 0.15 and dev_big < dev_small and secs < 300
    report(8, ok, f"tau={tau}: C/N = {big.ratio:.6f} vs {pred:.6f} (rel {big.relative_error:.3f}), "
                  f"deviation {dev_big:.2e} at 1e7 < {dev_small:.2e} at 1e5, {secs:.1f}s")


def test_criterion_09_reconciliation():
    bad = DensityTable.build(B=50).reconciliation_failures()
    report(9, not bad, f"sum n_tau = 1024 M_* for all types, squarefree b <= 50, failures {bad}")


def _random_pd(rng):
    A = rng.normal(size=(3, 3))
    return A.T @ A + 0.05 * np.eye(3)


def _random_unimodular(rng):
    while True:
        u = rng.integers(-2, 3, size=(3, 3))
        if abs(round(np.linalg.det(u))) == 1:
            return u


def _field_pairs(n):
    """Pairs of fields of one class with different shape parameters."""
    by_class = {}
    for m in admissible_range(2, 400):
        f = pure_quartic_field(m)
        by_class.setdefault(f.cls.label, {}).setdefault(f.lambda1_sq, f)
    pairs = []
    while len(pairs) < n:
        for fields in by_class.values():
            fs = list(fields.values())
            k = len(pairs) // len(by_class)
            if k + 1 < len(fs):
                pairs.append((fs[k], fs[k + 1]))
    return pairs[:n]


def test_criterion_10_reduction():
    rng = np.random.default_rng(20240611)
    not_in_domain = 0
    for _ in range(500):
        red, _ = minkowski_reduce(_random_pd(rng), TOL)
        not_in_domain += not in_F3(red, TOL)
    missed = 0
    for _ in range(500):
        g = _random_pd(rng)
        u = _random_unimodular(rng)
        s = float(np.exp(rng.uniform(-3, 3)))
        h = s * u.T @ g @ u
        red, _ = minkowski_reduce(h, TOL)
        not_in_domain += not in_F3(red, TOL)
        missed += not shapes_equivalent(g, h, TOL)
    false_equal = 0
    distinct_minima = 0
    for f1, f2 in _field_pairs(100):
        g1, g2 = (normalize(to_float(gram_perp(f))) for f in (f1, f2))
        m1 = successive_minima((u := lll_gram(g1)).T @ g1 @ u)
        m2 = successive_minima((u := lll_gram(g2)).T @ g2 @ u)
        distinct_minima += not np.allclose(m1, m2, rtol=1e-6)
        false_equal += shapes_equivalent(g1, g2, TOL)
    ok = not_in_domain == 0 and missed == 0 and false_equal == 0 and distinct_minima == 100
    report(10, ok, f"outside F3 {not_in_domain}/1000, equivalent pairs missed {missed}/500, "
                   f"inequivalent pairs accepted {false_equal}/100 (minima differ in {distinct_minima})")
