import functools
import math
from fractions import Fraction

import numpy as np
import pytest

from qshape import census
from qshape.census import (
    Rect,
    c_tau_histogram,
    count_C_tau,
    enumerate_fields,
    non_carefree_fraction,
    quadrant_count,
    theorem_ratio_report,
)
from qshape.densities import ZETA2, is_carefree, theorem_constant
from qshape.errors import InvalidTau, QShapeError
from qshape.fields import TYPE_RESIDUES, TWO_POWER, Type, admissible_range, pure_quartic_field


def field_oracle(limit_m, keep):
    """Distinct fields with |m| <= limit_m, keyed by counting-form m, filtered by keep(f)."""
    seen, excluded = {}, set()
    for m in admissible_range(2, limit_m):
        f = pure_quartic_field(m)
        cm = f.counting_form.m
        if cm in seen or cm in excluded or not keep(f):
            continue
        if cm % 8 == 0:
            excluded.add(cm)
        else:
            seen[cm] = f
    return seen, len(excluded)


def test_enumerate_by_disc_matches_oracle():
    X = 40000
    got = enumerate_fields(max_disc=X)
    want, n_excl = field_oracle(X // 4, lambda f: abs(f.discriminant) <= X)
    recs = {r.m: r for r in got}
    assert set(recs) == set(want)
    assert len(recs) == len(got)
    for m, f in want.items():
        r = recs[m]
        assert (r.typ, r.sign, r.disc) == (f.typ, f.sign, f.discriminant)
        assert r.lambda1_sq == f.lambda1_sq
    assert got.excluded_8divm == n_excl


def test_enumerate_by_N_matches_oracle():
    N = 14
    got = enumerate_fields(N)

    def keep(f):
        a, b, c = f.counting_form
        return abs(a) ** 3 * b * b * c**3 <= N**3

    want, n_excl = field_oracle(N**3, keep)
    assert sorted(r.m for r in got) == sorted(want)
    assert got.excluded_8divm == n_excl


def test_enumerate_examples():
    assert (2, 1, 1) in {(r.a, r.b, r.c) for r in enumerate_fields(2, signs=(1,))}
    assert (5, 1, 1) in {(r.a, r.b, r.c) for r in enumerate_fields(5, types=["III"], signs=(1,))}
    recs = list(enumerate_fields(400, tau=12, rect=Rect(1, 4, 1, 2), signs=(1,)))
    assert recs
    for r in recs:
        assert r.m % 32 == 12
        assert 1 <= Fraction(abs(r.a), r.c) <= 4 and r.b <= 2


def test_enumerate_order_and_uniqueness():
    recs = list(enumerate_fields(60))
    keys = [(r.b, r.c, abs(r.a), -r.sign) for r in recs]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    for r in recs:
        assert is_carefree(abs(r.a), r.b, r.c) and abs(r.a) >= r.c


def test_enumerate_needs_one_bound():
    with pytest.raises(QShapeError):
        enumerate_fields()
    with pytest.raises(QShapeError):
        enumerate_fields(10, max_disc=100)


def test_enumerate_thread_invariance(monkeypatch):
    monkeypatch.setattr(census, "_plan", functools.partial(census._plan, chunk=500))
    one = enumerate_fields(80, threads=1)
    four = enumerate_fields(80, threads=4)
    for name in ("a", "b", "c", "sign", "type_index"):
        assert np.array_equal(getattr(one, name), getattr(four, name))
    assert one.excluded_8divm == four.excluded_8divm
    assert np.array_equal(c_tau_histogram(300, 4, 3, 1), c_tau_histogram(300, 4, 3, 3))


def c_tau_loop(N, R1, R2, tau):
    n = 0
    for b in range(1, math.floor(R2) + 1):
        c = 1
        while c**6 * b * b < N**3:
            a = c
            while Fraction(a, c) <= R1 and (a * c) ** 3 * b * b < N**3:
                if is_carefree(a, b, c) and (a * b * b * c**3) % 32 == tau:
                    n += 1
                a += 1
            c += 1
    return n


@pytest.mark.parametrize("tau", [1, 2, 3, 12, 28, 31])
def test_c_tau_matches_loop(tau):
    assert count_C_tau(150, 4, 3, tau).empirical == c_tau_loop(150, 4, 3, tau)


def test_c_tau_example():
    rep = count_C_tau(1000, math.e**2, 1, 2)
    assert rep.predicted_ratio == pytest.approx(1 / (64 * ZETA2))
    assert rep.ratio == rep.empirical / rep.normalization


def test_c_tau_R1_one():
    rep = count_C_tau(1000, 1, 3, 1)
    assert rep.predicted == 0
    assert rep.empirical == 1  # only (1, 1, 1)
    assert count_C_tau(1000, 1, 3, 9).empirical == 1  # (1, 3, 1)


def test_c_tau_invalid():
    with pytest.raises(InvalidTau):
        count_C_tau(100, 4, 3, 8)


def test_theorem_degenerate_rect():
    rep = theorem_ratio_report(Type.II, 1, 10**9, Rect(1, 1, 1, 1))
    assert rep.empirical == 0 and rep.predicted == 0


@pytest.mark.parametrize("typ,sign", [(Type.I, 1), (Type.II, -1), (Type.III, 1), (Type.IV, -1), (Type.V, 1)])
def test_theorem_inclusion_exclusion(typ, sign):
    X = 2 ** TWO_POWER[typ] * 300**3
    r = Rect(1.5, 4, 1, 3)
    rep = theorem_ratio_report(typ, sign, X, r)
    q = functools.partial(quadrant_count, typ, sign, X)
    assert rep.empirical == q(r.R1hi, r.R2hi) - q(r.R1lo, r.R2hi) - q(r.R1hi, r.R2lo) + q(r.R1lo, r.R2lo)


@pytest.mark.parametrize("typ,sign", [(Type.II, 1), (Type.III, -1), (Type.V, -1)])
def test_theorem_count_matches_enumeration(typ, sign):
    X = 2 ** TWO_POWER[typ] * 200**3
    r = Rect(1, 4, 1, 3)
    rep = theorem_ratio_report(typ, sign, X, r)
    recs = enumerate_fields(max_disc=X, types=[typ], signs=(sign,), rect=r)
    want = sum(1 for x in recs if Fraction(abs(x.a), x.c) > 1 and x.b > 1)
    assert rep.empirical == want
    N = (X / 2 ** TWO_POWER[typ]) ** (1 / 3)
    assert rep.normalization == pytest.approx(N)
    assert rep.predicted_ratio == pytest.approx(theorem_constant(typ, 1, 4, 1, 3))
    assert rep.ratio == rep.empirical / rep.normalization


def test_theorem_residues_partition():
    # the five types together with 8 | m account for every residue class
    covered = sorted(t for typ in Type for t in TYPE_RESIDUES[typ])
    assert covered == [t for t in range(32) if t % 8]


def test_non_carefree_examples():
    rep = non_carefree_fraction(10**4, 2)
    assert 0 < rep.fraction < 1
    assert non_carefree_fraction(100, 101).fraction == 0
    assert non_carefree_fraction(10**4, 5).fraction <= non_carefree_fraction(10**4, 3).fraction
    assert rep.envelope == pytest.approx(2 ** (-4 / 3) + 1e-2)


def test_non_carefree_matches_loop():
    N, l = 60, 2
    rep = non_carefree_fraction(N, l)
    total = bad = 0
    for b in range(1, 4):
        for c in range(1, N):
            for a in range(c, 4 * c + 1):
                if (a * c) ** 3 * b * b < N**3:
                    total += 1
                    bad += (a * b) % 4 == 0 or (b * c) % 4 == 0 or (a * c) % 4 == 0
    assert (rep.total, rep.failing) == (total, bad)


def test_rect_validation():
    with pytest.raises(QShapeError):
        Rect(2, 1, 1, 1)
    with pytest.raises(QShapeError):
        Rect.parse("1,2,3")
    assert Rect.parse("1,4,1,3") == Rect(1, 4, 1, 3)
