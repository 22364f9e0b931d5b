"""Pure quartic fields Q(m^(1/4)): normal forms, types and discriminants."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import factor, is_square
from .errors import Degenerate, ExcludedMinusFour, FourthPowerNotFree, Reducible


class Type(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"

    def __str__(self):
        return self.value


# exponent of 2 in |disc|; Theorem normalisation uses the same values
TWO_POWER = {Type.I: 2, Type.II: 8, Type.III: 4, Type.IV: 4, Type.V: 2}

# residues mod 32 (with 8 not dividing them) belonging to each type
TYPE_RESIDUES = {
    Type.I: tuple(t for t in range(32) if t % 8 == 1),
    Type.II: tuple(t for t in range(32) if t % 4 in (2, 3)),
    Type.III: tuple(t for t in range(32) if t % 16 == 4 or t % 8 == 5),
    Type.IV: (12,),
    Type.V: (28,),
}

_RESIDUE_TYPE = {t: typ for typ, ts in TYPE_RESIDUES.items() for t in ts}


def type_of_residue(m: int) -> Type | None:
    """Type of ``m`` from its least nonnegative residue mod 32, None if 8 | m."""
    return _RESIDUE_TYPE.get(m % 32)


@dataclass(frozen=True)
class NormalForm:
    a: int
    b: int
    c: int
    convention: str  # "counting" or "funakura"

    @property
    def sign(self) -> int:
        return 1 if self.a > 0 else -1

    @property
    def m(self) -> int:
        return self.a * self.b**2 * self.c**3

    def __iter__(self):
        return iter((self.a, self.b, self.c))


@dataclass(frozen=True)
class FieldClass:
    typ: Type
    sign: int

    @property
    def two_power(self) -> int:
        return TWO_POWER[self.typ]

    @property
    def r_star(self) -> int:
        return TWO_POWER[self.typ]

    @property
    def label(self) -> str:
        return f"{self.typ.value}{'+' if self.sign > 0 else '-'}"

    def __str__(self):
        return self.label


ALL_CLASSES = tuple(FieldClass(t, s) for t in Type for s in (1, -1))


@dataclass(frozen=True)
class PureQuarticField:
    m: int
    counting_form: NormalForm
    funakura_form: NormalForm
    cls: FieldClass
    discriminant: int

    @property
    def funakura_m(self) -> int:
        return self.funakura_form.m

    @property
    def typ(self) -> Type:
        return self.cls.typ

    @property
    def sign(self) -> int:
        return self.cls.sign

    @property
    def lambda1_sq(self) -> Fraction:
        a, _, c = self.counting_form
        return Fraction(c, abs(a))

    @property
    def lambda2(self) -> Fraction:
        return Fraction(1, self.counting_form.b)


def raw_abc(m: int) -> tuple[int, int, int]:
    """Split |m| into exponent-1, exponent-2 and exponent-3 parts; sign goes on a."""
    if abs(m) <= 1:
        raise Degenerate(f"m={m}: need |m| >= 2")
    a = b = c = 1
    for p, e in factor(abs(m)):
        if e >= 4:
            raise FourthPowerNotFree(f"m={m} is divisible by {p}^4")
        if e == 1:
            a *= p
        elif e == 2:
            b *= p
        else:
            c *= p
    return (a if m > 0 else -a), b, c


def _swap(a: int, b: int, c: int) -> tuple[int, int, int]:
    # fourth-power-free part of m^3: a^3 b^6 c^9 -> c * b^2 * |a|^3
    return (c if a > 0 else -c), b, abs(a)


def _check(m: int) -> None:
    if m == -4:
        raise ExcludedMinusFour(f"m={m}: excluded case X^4 + 4 (reducible)")


def counting_normal_form(m: int) -> NormalForm:
    _check(m)
    a, b, c = raw_abc(m)
    if abs(a) < c:
        a, b, c = _swap(a, b, c)
    if a == 1:
        raise Reducible(f"m={m}: X^4 - m is reducible (m is a square)")
    return NormalForm(a, b, c, "counting")


def funakura_normal_form(m: int) -> NormalForm:
    _check(m)
    a, b, c = raw_abc(m)
    if c % 2 == 0:
        a, b, c = _swap(a, b, c)
    if a % 2 and abs(a) < c:
        a, b, c = _swap(a, b, c)
    if a == 1:
        raise Reducible(f"m={m}: X^4 - m is reducible (m is a square)")
    return NormalForm(a, b, c, "funakura")


def classify(m: int) -> FieldClass:
    f = funakura_normal_form(m)
    typ = type_of_residue(f.m)
    if typ is None:  # unreachable: c odd forces v_2(m) <= 2
        raise AssertionError(f"funakura form of {m} is divisible by 8")
    return FieldClass(typ, 1 if m > 0 else -1)


def discriminant_of(form: NormalForm, cls: FieldClass) -> int:
    a, b, c = form
    return -(2**cls.two_power) * a**3 * b**2 * c**3


@lru_cache(maxsize=32768)
def pure_quartic_field(m: int) -> PureQuarticField:
    """Build the field record for ``m`` (any admissible nonzero integer)."""
    cf = counting_normal_form(m)
    ff = funakura_normal_form(m)
    cls = classify(m)
    return PureQuarticField(m, cf, ff, cls, discriminant_of(ff, cls))


def discriminant(f: PureQuarticField | int) -> int:
    """Discriminant of K_m from the funakura form.

    Negative for m > 0 (one complex pair), positive for m < 0 (two pairs).
    """
    if isinstance(f, int):
        f = pure_quartic_field(f)
    return discriminant_of(f.funakura_form, f.cls)


def polynomial_discriminant(m: int) -> int:
    """disc(X^4 - m) as the resultant Res(f, f') divided by the leading term.

    Computed from the Sylvester matrix so it does not rely on the closed form.
    """
    f = [1, 0, 0, 0, -m]
    df = [4, 0, 0, 0]
    n = 7
    rows = []
    for i in range(3):
        rows.append([0] * i + f + [0] * (n - 5 - i))
    for i in range(4):
        rows.append([0] * i + df + [0] * (n - 4 - i))
    res = _int_det(rows)
    # disc = (-1)^(n(n-1)/2) / lc * Res = Res for degree 4, monic
    return res


def _int_det(rows: list[list[int]]) -> int:
    # Bareiss fraction-free elimination
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def index_square_check(f: PureQuarticField | int) -> bool:
    """True iff disc(X^4 - m') / disc(K) is a perfect square, m' the funakura m."""
    if isinstance(f, int):
        f = pure_quartic_field(f)
    num = polynomial_discriminant(f.funakura_m)
    if num % f.discriminant:
        return False
    ratio = num // f.discriminant
    return ratio > 0 and is_square(ratio)


def disc_bound_to_N(X: float, cls: FieldClass | Type) -> float:
    """N with |disc| <= X  <=>  |a| b^(2/3) c <= N."""
    typ = cls.typ if isinstance(cls, FieldClass) else cls
    return (X / 2 ** TWO_POWER[typ]) ** (1.0 / 3.0)


def is_admissible(m: int) -> bool:
    try:
        counting_normal_form(m)
    except (Degenerate, FourthPowerNotFree, Reducible, ExcludedMinusFour):
        return False
    return True


def admissible_range(lo: int, hi: int, signs=(1, -1)):
    """Admissible m with lo <= |m| <= hi, ordered by |m| then sign."""
    for k in range(max(lo, 2), hi + 1):
        for s in signs:
            if is_admissible(s * k):
                yield s * k
