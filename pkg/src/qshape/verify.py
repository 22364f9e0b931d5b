"""Invariant suites shared by the command line and the acceptance tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from .census import count_C_tau
from .densities import (
    DensityTable,
    brute_force_A,
    carefree_count_formula,
    carefree_density,
)
from .fields import admissible_range, index_square_check, pure_quartic_field
from .gram import gram, gram_determinant, gram_numeric, torus_factorization_check
from .lattice import (
    area_S,
    boundary_length_bound,
    count_R_exact,
    count_S_exact,
    predicted_count_R,
    sqrt_error_constant,
)
from .quadratic import to_float


@dataclass(frozen=True)
class Check:
    check: str
    status: str  # "pass" or "fail"
    observed: Any
    expected: Any
    tolerance: Any

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "observed": self.observed,
            "expected": self.expected,
            "tolerance": self.tolerance,
        }


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def gram_relative_error(f) -> float:
    """Largest |exact - numeric| / sqrt(g_ii g_jj) over the 4x4 Gram matrix."""
    G = to_float(gram(f))
    Gn = gram_numeric(f)
    scale = np.sqrt(np.outer(np.diag(G), np.diag(G)))
    return float(np.max(np.abs(G - Gn) / scale))


def verify_gram(max_m: int = 5000, numeric_max_m: int | None = 2000) -> list[Check]:
    """Exact determinant, index square, torus factorization and embedding oracle."""
    numeric_max_m = max_m if numeric_max_m is None else min(numeric_max_m, max_m)
    det_bad, idx_bad, torus_bad = [], [], []
    worst = 0.0
    n = 0
    for m in admissible_range(2, max_m):
        f = pure_quartic_field(m)
        n += 1
        if gram_determinant(f) != abs(f.discriminant):
            det_bad.append(m)
        if not index_square_check(f):
            idx_bad.append(m)
        if not torus_factorization_check(f):
            torus_bad.append(m)
        if abs(m) <= numeric_max_m:
            worst = max(worst, gram_relative_error(f))
    return [
        Check("gram_determinant", _status(not det_bad),
              {"fields": n, "failures": det_bad[:20]}, "det = |disc| for all", 0),
        Check("index_square", _status(not idx_bad),
              {"fields": n, "failures": idx_bad[:20]}, "perfect square for all", 0),
        Check("torus_factorization", _status(not torus_bad),
              {"fields": n, "failures": torus_bad[:20]}, "exact equality for all", 0),
        Check("embedding_oracle", _status(worst <= 1e-9),
              {"max_m": numeric_max_m, "max_relative_error": worst}, 0.0, 1e-9),
    ]


def verify_densities(ls=(3, 5, 7, 11, 13), max_b: int = 50) -> list[Check]:
    out = []
    for l in ls:
        got = brute_force_A(l)
        want = carefree_count_formula(l)
        total = l**6
        out.append(Check(
            f"carefree_count_l{l}", _status(got == want),
            {"count": got, "total": total, "density": str(Fraction(got, total))},
            {"count": want, "density": str(carefree_density(l))}, 0,
        ))
    bad = DensityTable.build(B=max_b).reconciliation_failures()
    out.append(Check(
        "n_tau_M_star_reconciliation", _status(not bad),
        {"max_b": max_b, "failures": [(t.value, b, str(x), str(y)) for t, b, x, y in bad[:20]]},
        "sum of n_tau = 1024 M_*", 0,
    ))
    return out


DEFAULT_M_GRID = (10**2, 10**3, 10**4, 10**5)
DEFAULT_R_GRID = (1, 2, 5, 10)


def verify_lipschitz(Ms=DEFAULT_M_GRID, Rs=DEFAULT_R_GRID) -> list[Check]:
    out = []
    for M in Ms:
        for R in Rs:
            cnt = count_S_exact(M, R)
            area = area_S(float(M), float(R))
            bound = 4 * (boundary_length_bound(float(M), float(R)) + 1)
            out.append(Check(
                f"lipschitz_M{M:g}_R{R:g}", _status(abs(cnt - area) <= bound),
                {"count": cnt, "area": area, "error": abs(cnt - area)}, area, bound,
            ))
    return out


def verify_counting(N=10**6, R1=4.0, R2=3.0, tau=3, rel_tol=0.15, threads=1,
                    Ns=(10**3, 10**4, 10**5, 10**6)) -> list[Check]:
    rep = count_C_tau(N, R1, R2, tau, threads)
    out = [Check(
        f"c_tau_{rep.params['tau']}",
        _status(rep.relative_error <= rel_tol),
        {"ratio": rep.ratio, "empirical": rep.empirical, "sieve_ratio": rep.sieve_ratio},
        rep.predicted_ratio, rel_tol,
    )]
    C = sqrt_error_constant(R1, R2, min(Ns))
    errs = {f"{n:g}": abs(count_R_exact(n, R1, R2) - predicted_count_R(n, R1, R2)) / math.sqrt(n)
            for n in Ns}
    out.append(Check("sqrt_error_bound", _status(max(errs.values()) <= C), errs, "bounded", C))
    return out
