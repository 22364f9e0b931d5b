"""Enumeration of carefree triples and the empirical-versus-predicted reports.

Triples (a, b, c) are enumerated positively with a >= c and handled in
b-slices, each split into c-ranges of bounded size. Work items are processed
in a fixed order and merged by summation or concatenation, so the result
does not depend on the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .arith import ceil_mul, floor_mul, iroot, squarefree_table
from .densities import (
    c_tau_constant,
    check_tau,
    sieve_density,
    sieve_density_constant,
    theorem_constant,
)
from .errors import QShapeError
from .fields import TWO_POWER, TYPE_RESIDUES, Type, type_of_residue
from .lattice import slice_threshold

CHUNK_PAIRS = 1 << 21

_TYPES = tuple(Type)
_TYPE_INDEX = {t: i for i, t in enumerate(_TYPES)}
# residue mod 32 -> type index, -1 where 8 | residue
_RESIDUE_TO_TYPE = np.array(
    [_TYPE_INDEX[type_of_residue(r)] if r % 8 else -1 for r in range(32)], dtype=np.int8
)
_TWO_POWER_BY_INDEX = np.array([TWO_POWER[t] for t in _TYPES])


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Region:
    N: float
    R1: float
    R2: float

    def __post_init__(self):
        if not (self.N > 0 and self.R1 >= 1 and self.R2 >= 1):
            raise QShapeError(f"invalid region N={self.N}, R1={self.R1}, R2={self.R2}")


@dataclass(frozen=True)
class Rect:
    R1lo: float
    R1hi: float
    R2lo: float
    R2hi: float

    def __post_init__(self):
        if not (1 <= self.R1lo <= self.R1hi and 1 <= self.R2lo <= self.R2hi):
            raise QShapeError(f"invalid rectangle {self}")

    @classmethod
    def parse(cls, text: str) -> Rect:
        """'R1lo,R1hi,R2lo,R2hi'."""
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 4:
            raise QShapeError(f"rectangle needs four numbers, got {text!r}")
        return cls(*parts)


# -- pair generation -----------------------------------------------------------


@dataclass(frozen=True)
class _Slice:
    b: int
    T: int  # a c <= T
    r1lo: Fraction
    r1hi: Fraction
    open_lo: bool  # a > r1lo c instead of a >= r1lo c
    carefree: bool


def _bounds(s: _Slice, cs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    hi = np.minimum(floor_mul(s.r1hi, cs), s.T // cs)
    lo = floor_mul(s.r1lo, cs) + 1 if s.open_lo else ceil_mul(s.r1lo, cs)
    return np.maximum(lo, cs), hi


def _candidate_cs(s: _Slice, sq: np.ndarray) -> np.ndarray:
    cs = np.arange(1, math.isqrt(s.T) + 1, dtype=np.int64)
    if s.carefree:
        cs = cs[sq[cs] & (np.gcd(cs, s.b) == 1)]
    return cs


def _pairs(s: _Slice, cs: np.ndarray, sq: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All (a, c) in the slice for the given c values, ordered by (c, a)."""
    lo, hi = _bounds(s, cs)
    L = np.maximum(hi - lo + 1, 0)
    total = int(L.sum())
    if total == 0:
        e = np.zeros(0, dtype=np.int64)
        return e, e
    start = np.cumsum(L) - L
    a = np.repeat(lo - start, L) + np.arange(total, dtype=np.int64)
    c = np.repeat(cs, L)
    if s.carefree:
        keep = sq[a] & (np.gcd(a, c) == 1) & (np.gcd(a, s.b) == 1)
        a, c = a[keep], c[keep]
    return a, c


def _plan(slices: list[_Slice], chunk: int = CHUNK_PAIRS) -> list[tuple[_Slice, np.ndarray]]:
    """Split slices into work items of at most ``chunk`` candidate pairs."""
    # table must cover every a before threads start reading it
    amax = 1
    per_slice = []
    for s in slices:
        cs = np.arange(1, math.isqrt(s.T) + 1, dtype=np.int64)
        if len(cs):
            amax = max(amax, int(_bounds(s, cs)[1].max()))
        per_slice.append(s)
    sq = squarefree_table(amax + 1)
    items = []
    for s in per_slice:
        cs = _candidate_cs(s, sq)
        if not len(cs):
            continue
        lo, hi = _bounds(s, cs)
        L = np.maximum(hi - lo + 1, 0)
        cuts = np.searchsorted(np.cumsum(L), np.arange(chunk, int(L.sum()), chunk))
        for part in np.split(cs, np.unique(cuts + 1)):
            if len(part):
                items.append((s, part))
    return items


def _run(items, fn: Callable, threads: int):
    sq = squarefree_table(1)
    work = lambda it: fn(it[0], *_pairs(it[0], it[1], sq))  # noqa: E731
    if threads <= 1 or len(items) <= 1:
        return [work(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(work, items))


def _residues(b: int, a: np.ndarray, c: np.ndarray) -> np.ndarray:
    return ((a % 32) * ((b * b) % 32) * ((c % 32) ** 3)) % 32


def residue_histogram(slices: list[_Slice], threads: int = 1) -> np.ndarray:
    """Counts of a b^2 c^3 mod 32 over all pairs in the slices."""
    def fn(s, a, c):
        return np.bincount(_residues(s.b, a, c), minlength=32)

    parts = _run(_plan(slices), fn, threads)
    return np.sum(parts, axis=0, dtype=np.int64) if parts else np.zeros(32, dtype=np.int64)


def _squarefree_bs(lo_exclusive: float | None, hi: float) -> list[int]:
    start = 1 if lo_exclusive is None else math.floor(lo_exclusive) + 1
    top = math.floor(hi)
    sq = squarefree_table(max(top, 1))
    return [b for b in range(start, top + 1) if sq[b]]


# -- field enumeration -------------------------------------------------------------


@dataclass(frozen=True)
class FieldRecord:
    m: int
    a: int  # signed, counting form
    b: int
    c: int
    sign: int
    typ: Type
    disc: int

    @property
    def lambda1_sq(self) -> Fraction:
        return Fraction(self.c, abs(self.a))


@dataclass
class FieldEnumeration:
    """Enumerated fields in generation order (b, c, |a|), sign + before -."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    sign: np.ndarray
    type_index: np.ndarray
    excluded_8divm: int = 0

    def __len__(self):
        return len(self.a)

    def __iter__(self) -> Iterator[FieldRecord]:
        for a, b, c, s, t in zip(
            self.a.tolist(), self.b.tolist(), self.c.tolist(), self.sign.tolist(), self.type_index.tolist()
        ):
            typ = _TYPES[t]
            sa = s * a
            yield FieldRecord(sa * b * b * c**3, sa, b, c, s, typ, -(2 ** TWO_POWER[typ]) * sa**3 * b * b * c**3)

    def sorted_by_disc(self) -> list[FieldRecord]:
        return sorted(self, key=lambda r: (abs(r.disc), r.m))


def enumerate_fields(
    N: float | None = None,
    *,
    max_disc: int | float | None = None,
    types=None,
    signs=(1, -1),
    rect: Rect | None = None,
    tau: int | None = None,
    threads: int = 1,
) -> FieldEnumeration:
    """Carefree triples with |a| >= c, |a| b^(2/3) c <= N (or |disc| <= max_disc).

    ``rect`` restricts (|a|/c, b) to a closed rectangle. Triples with
    8 | a b^2 c^3 have no residue type and are only tallied.
    """
    if (N is None) == (max_disc is None):
        raise QShapeError("give exactly one of N and max_disc")
    types = None if types is None else {Type(t) for t in types}
    signs = tuple(sorted(set(signs), reverse=True))
    if tau is not None:
        tau = check_tau(tau)
    if max_disc is not None:
        X = _frac(max_disc)
        # k = 2 gives the widest slab; the exact per-type test is applied below
        b_max = math.isqrt(math.floor(X / 4))
        limits = {}
    else:
        b_max = math.isqrt(math.floor(_frac(N) ** 3))
    r1lo = _frac(rect.R1lo) if rect else Fraction(1)
    b_lo = max(math.ceil(rect.R2lo), 1) if rect else 1
    if rect:
        b_max = min(b_max, math.floor(rect.R2hi))
    sq = squarefree_table(max(b_max, 1))
    slices = []
    for b in range(b_lo, b_max + 1):
        if not sq[b]:
            continue
        if max_disc is not None:
            T = iroot(math.floor(X / (4 * b * b)), 3)
        else:
            T = slice_threshold(N, b, strict=False)
        if T >= 1:
            r1hi = _frac(rect.R1hi) if rect else Fraction(T)
            slices.append(_Slice(b, T, r1lo, r1hi, False, True))

    def fn(s, a, c):
        r = _residues(s.b, a, c)
        out = []
        excluded = 0
        for sg in signs:
            rs = r if sg > 0 else (-r) % 32
            if sg > 0:
                keep = a > 1  # a = 1 makes m a square
            else:
                keep = ~((a == 1) & (s.b <= 2))  # m = -1 and m = -4
            t_idx = _RESIDUE_TO_TYPE[rs]
            div8 = t_idx < 0
            if max_disc is not None:
                # 8 | m: the type comes from the swapped form c b^2 a^3, same |disc| shape
                swapped = (sg * (c % 32) * ((s.b * s.b) % 32) * ((a % 32) ** 3)) % 32
                t_eff = np.where(div8, _RESIDUE_TO_TYPE[swapped], t_idx)
                for kk in (2, 4, 8):
                    if (s.b, kk) not in limits:
                        limits[s.b, kk] = iroot(math.floor(X / (2**kk * s.b * s.b)), 3)
                k = _TWO_POWER_BY_INDEX[t_eff]
                lim = np.select([k == 2, k == 4], [limits[s.b, 2], limits[s.b, 4]], limits[s.b, 8])
                # |disc| = 2^k (ac)^3 b^2 <= X, decided exactly
                keep &= (a * c) <= lim
            excluded += int((keep & div8).sum())
            keep &= ~div8
            if types is not None:
                keep &= np.isin(t_idx, [_TYPE_INDEX[t] for t in types])
            if tau is not None:
                keep &= rs == tau
            out.append((sg, keep, t_idx))
        n = len(a)
        idx = np.arange(n)
        rows = []
        for sg, keep, t_idx in out:
            sel = idx[keep]
            rows.append((sel, np.full(len(sel), sg, dtype=np.int64), t_idx[sel]))
        order_idx = np.concatenate([r[0] for r in rows]) if rows else idx[:0]
        sgn = np.concatenate([r[1] for r in rows]) if rows else idx[:0]
        tix = np.concatenate([r[2] for r in rows]) if rows else idx[:0]
        # keep (c, a) order with sign + before - for equal pairs
        perm = np.lexsort((-sgn, order_idx))
        sel = order_idx[perm]
        return a[sel], np.full(len(sel), s.b, dtype=np.int64), c[sel], sgn[perm], tix[perm], excluded

    parts = _run(_plan(slices), fn, threads)
    if not parts:
        e = np.zeros(0, dtype=np.int64)
        return FieldEnumeration(e, e, e, e, e.astype(np.int8), 0)
    cat = [np.concatenate([p[i] for p in parts]) for i in range(5)]
    return FieldEnumeration(*cat, excluded_8divm=sum(p[5] for p in parts))


# -- reports ---------------------------------------------------------------------


@dataclass(frozen=True)
class CountReport:
    """An empirical count next to the closed-form prediction.

    ``predicted`` is a count (``predicted_ratio * normalization``) and
    ``ratio = empirical / normalization`` is compared with ``predicted_ratio``.
    """

    params: dict
    empirical: int
    predicted: float
    predicted_ratio: float
    normalization: float
    ratio: float
    excluded_8divm: int
    literal_normalization: float | None = None
    sieve_ratio: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def relative_error(self) -> float:
        if self.predicted_ratio == 0:
            return math.inf if self.ratio else 0.0
        return abs(self.ratio / self.predicted_ratio - 1)

    def as_dict(self) -> dict:
        d = {
            "params": self.params,
            "empirical": self.empirical,
            "predicted": self.predicted,
            "predicted_ratio": self.predicted_ratio,
            "normalization": self.normalization,
            "ratio": self.ratio,
            "excluded_8divm": self.excluded_8divm,
        }
        if self.literal_normalization is not None:
            d["literal_normalization"] = self.literal_normalization
            d["literal_ratio"] = self.empirical / self.literal_normalization
        if self.sieve_ratio is not None:
            d["sieve_ratio"] = self.sieve_ratio
        d.update(self.extra)
        return d


def c_tau_histogram(N, R1, R2, threads: int = 1) -> np.ndarray:
    """Residue counts mod 32 over carefree triples with a b^(2/3) c < N, a/c <= R1, b <= R2."""
    R1 = _frac(R1)
    slices = [_Slice(b, slice_threshold(N, b, strict=True), Fraction(1), R1, False, True)
              for b in _squarefree_bs(None, R2)]
    return residue_histogram([s for s in slices if s.T >= 1], threads)


def count_C_tau(N, R1, R2, tau: int, threads: int = 1) -> CountReport:
    t = check_tau(tau)
    hist = c_tau_histogram(N, R1, R2, threads)
    const = c_tau_constant(t, float(R1), float(R2))
    N = float(N)
    emp = int(hist[t])
    return CountReport(
        params={"N": N, "R1": float(R1), "R2": float(R2), "tau": t},
        empirical=emp,
        predicted=const * N,
        predicted_ratio=const,
        normalization=N,
        ratio=emp / N,
        excluded_8divm=int(hist[::8].sum()),
        sieve_ratio=sieve_density_constant(t, float(R1), float(R2)),
    )


def _theorem_slices(typ: Type, X: Fraction, rect: Rect) -> list[_Slice]:
    k = TWO_POWER[typ]
    out = []
    for b in _squarefree_bs(rect.R2lo, rect.R2hi):
        T = iroot(math.floor(X / (2**k * b * b)), 3)
        if T >= 1:
            out.append(_Slice(b, T, _frac(rect.R1lo), _frac(rect.R1hi), True, True))
    return out


def theorem_ratio_report(typ, sign: int, X, rect: Rect, threads: int = 1) -> CountReport:
    """Fields of the given type and sign with |disc| <= X and (|a|/c, b) in ``rect``.

    The rectangle is taken half-open on its lower sides, which is what the
    four-corner inclusion-exclusion of closed quadrant counts produces.
    """
    typ = Type(typ)
    if sign not in (1, -1):
        raise QShapeError(f"sign must be +1 or -1, got {sign}")
    Xf = _frac(X)
    hist = residue_histogram(_theorem_slices(typ, Xf, rect), threads)
    if sign < 0:
        hist = hist[(-np.arange(32)) % 32]
    emp = int(sum(hist[t] for t in TYPE_RESIDUES[typ]))
    k = TWO_POWER[typ]
    N = (float(Xf) / 2**k) ** (1.0 / 3.0)
    const = theorem_constant(typ, rect.R1lo, rect.R1hi, rect.R2lo, rect.R2hi)
    literal = 2 ** (k / 3) * float(Xf) ** (1.0 / 3.0)
    return CountReport(
        params={"type": typ.value, "sign": "+" if sign > 0 else "-", "X": float(Xf),
                "rect": [rect.R1lo, rect.R1hi, rect.R2lo, rect.R2hi]},
        empirical=emp,
        predicted=const * N,
        predicted_ratio=const,
        normalization=N,
        ratio=emp / N if N else 0.0,
        excluded_8divm=int(hist[::8].sum()),
        literal_normalization=literal,
        sieve_ratio=sieve_density(
            TYPE_RESIDUES[typ], rect.R1lo, rect.R1hi,
            range(math.floor(rect.R2lo) + 1, math.floor(rect.R2hi) + 1), sign,
        ),
    )


def quadrant_count(typ, sign: int, X, R1: float, R2: float) -> int:
    """Fields with |a|/c <= R1 and b <= R2 (closed), used for inclusion-exclusion."""
    typ = Type(typ)
    Xf = _frac(X)
    k = TWO_POWER[typ]
    slices = []
    for b in _squarefree_bs(None, R2):
        T = iroot(math.floor(Xf / (2**k * b * b)), 3)
        if T >= 1:
            slices.append(_Slice(b, T, Fraction(1), _frac(R1), False, True))
    hist = residue_histogram(slices)
    if sign < 0:
        hist = hist[(-np.arange(32)) % 32]
    return int(sum(hist[t] for t in TYPE_RESIDUES[typ]))


@dataclass(frozen=True)
class NonCarefreeReport:
    N: float
    l: int
    total: int
    failing: int
    fraction: float
    envelope: float


def non_carefree_fraction(N, l: int, R1=4, R2=3, K: float = 1.0, threads: int = 1) -> NonCarefreeReport:
    """Share of integer triples in R(N, R1, R2) that are not l-carefree."""
    q = l * l
    slices = [_Slice(b, slice_threshold(N, b, strict=True), Fraction(1), _frac(R1), False, False)
              for b in range(1, math.floor(R2) + 1)]
    slices = [s for s in slices if s.T >= 1]

    def fn(s, a, c):
        bad = ((a * s.b) % q == 0) | ((c * s.b) % q == 0) | ((a * c) % q == 0)
        return len(a), int(bad.sum())

    parts = _run(_plan(slices), fn, threads)
    total = sum(p[0] for p in parts)
    failing = sum(p[1] for p in parts)
    frac = failing / total if total else 0.0
    env = K * (l ** (-4.0 / 3.0) + float(N) ** -0.5)
    return NonCarefreeReport(float(N), l, total, failing, frac, env)
