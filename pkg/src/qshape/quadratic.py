"""Exact arithmetic in a real quadratic field Q(sqrt(d))."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering

import numpy as np


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@total_ordering
class QuadraticReal:
    """The number x + y*sqrt(d) with rational x, y and squarefree d >= 1.

    Elements with different radicands combine only when one of them is
    rational. For d == 1 the irrational part is folded into x.
    """

    __slots__ = ("x", "y", "d")

    def __init__(self, x=0, y=0, d: int = 1):
        x = x if isinstance(x, Fraction) else Fraction(x)
        y = y if isinstance(y, Fraction) else Fraction(y)
        if d < 1:
            raise ValueError(f"radicand must be positive, got {d}")
        if d == 1:
            x, y = x + y, Fraction(0)
        self.x = x
        self.y = y
        self.d = d

    @classmethod
    def _coerce(cls, other, d):
        if isinstance(other, QuadraticReal):
            return other
        if isinstance(other, (int, Fraction)):
            return cls(other, 0, d)
        return None

    def _radicand(self, other: QuadraticReal) -> int:
        if self.d == other.d or not other.y:
            return self.d
        if not self.y:
            return other.d
        raise ValueError(f"mixed radicands sqrt({self.d}) and sqrt({other.d})")

    def __add__(self, other):
        o = self._coerce(other, self.d)
        if o is None:
            return NotImplemented
        return QuadraticReal(self.x + o.x, self.y + o.y, self._radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticReal(-self.x, -self.y, self.d)

    def __sub__(self, other):
        o = self._coerce(other, self.d)
        if o is None:
            return NotImplemented
        return QuadraticReal(self.x - o.x, self.y - o.y, self._radicand(o))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadraticReal(self.x * other, self.y * other, self.d)
        if not isinstance(other, QuadraticReal):
            return NotImplemented
        d = self._radicand(other)
        return QuadraticReal(
            self.x * other.x + self.y * other.y * d,
            self.x * other.y + self.y * other.x,
            d,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def conjugate(self) -> QuadraticReal:
        return QuadraticReal(self.x, -self.y, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadraticReal(self.x / other, self.y / other, self.d)
        if not isinstance(other, QuadraticReal):
            return NotImplemented
        n = other.norm()
        if n == 0:
            # only possible for other == 0 since d is squarefree
            raise ZeroDivisionError("division by zero")
        return (self * other.conjugate()) / n

    def __rtruediv__(self, other):
        o = self._coerce(other, self.d)
        if o is None:
            return NotImplemented
        return o / self

    def sign(self) -> int:
        """Exact sign using integer arithmetic only."""
        sx = (self.x > 0) - (self.x < 0)
        sy = (self.y > 0) - (self.y < 0)
        if sy == 0 or sx == sy:
            return sx or sy
        if sx == 0:
            return sy
        # opposite signs: compare x^2 with d*y^2
        diff = self.x * self.x - self.d * self.y * self.y
        return sx if diff > 0 else (-sx if diff < 0 else 0)

    def is_rational(self) -> bool:
        return self.y == 0

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def __eq__(self, other):
        o = self._coerce(other, self.d)
        if o is None:
            return NotImplemented
        if self.y == 0 and o.y == 0:
            return self.x == o.x
        return self.d == o.d and self.x == o.x and self.y == o.y

    def __lt__(self, other):
        o = self._coerce(other, self.d)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self):
        return hash((self.x, self.y, self.d if self.y else 1))

    def __float__(self):
        return quad_eval(self)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self):
        return f"QuadraticReal({self.x!s}, {self.y!s}, d={self.d})"

    def __str__(self):
        """Serialized as 'p/q', 'r/s*sqrt(d)' or 'p/q+r/s*sqrt(d)' with no spaces."""
        if self.y == 0:
            return _frac_str(self.x)
        ay = abs(self.y)
        rad = f"sqrt({self.d})" if ay == 1 else f"{_frac_str(ay)}*sqrt({self.d})"
        if self.x == 0:
            return rad if self.y > 0 else "-" + rad
        return f"{_frac_str(self.x)}{'+' if self.y > 0 else '-'}{rad}"


_TOKEN = re.compile(
    r"^(?:(?P<x>-?\d+(?:/\d+)?)(?=$|[+-]))?"
    r"(?:(?P<s>[+-])?(?:(?P<y>\d+(?:/\d+)?)\*)?sqrt\((?P<d>\d+)\))?$"
)


def parse_quadratic(text: str) -> QuadraticReal:
    """Inverse of ``str(QuadraticReal)``."""
    m = _TOKEN.match(text.strip())
    if not m or (m.group("x") is None and m.group("d") is None):
        raise ValueError(f"not a quadratic token: {text!r}")
    x = Fraction(m.group("x")) if m.group("x") else Fraction(0)
    if m.group("d") is None:
        return QuadraticReal(x)
    y = Fraction(m.group("y")) if m.group("y") else Fraction(1)
    if m.group("s") == "-":
        y = -y
    return QuadraticReal(x, y, int(m.group("d")))


def quad_eval(q: QuadraticReal) -> float:
    """Float value correct to a few units in the last place.

    When x and y*sqrt(d) have opposite signs the value is computed as
    (x^2 - d y^2) / (x - y sqrt(d)), whose numerator is exact and whose
    denominator does not cancel.
    """
    if q.y == 0:
        return float(q.x)
    root = float(q.y) * math.sqrt(q.d)
    if q.x == 0 or (q.x > 0) == (q.y > 0):
        return float(q.x) + root
    return float(q.x * q.x - q.y * q.y * q.d) / (float(q.x) - root)


# -- small exact matrix helpers ------------------------------------------------


def mat_mul(A, B):
    n, k, p = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(k)), Fraction(0)) for j in range(p)]
            for i in range(n)]


def transpose(A):
    return [list(r) for r in zip(*A)]


def det(M):
    """Determinant by Gaussian elimination over any exact field."""
    a = [list(r) for r in M]
    n = len(a)
    result = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            result = -result
        result = result * a[k][k]
        inv = 1 / a[k][k] if isinstance(a[k][k], QuadraticReal) else Fraction(1) / a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f != 0:
                for j in range(k + 1, n):
                    a[i][j] = a[i][j] - f * a[k][j]
    return result


def leading_minors(M):
    return [det([row[:k] for row in M[:k]]) for k in range(1, len(M) + 1)]


def _sign(v) -> int:
    if isinstance(v, QuadraticReal):
        return v.sign()
    return (v > 0) - (v < 0)


def is_positive_definite(M) -> bool:
    """Sylvester's criterion with exact signs."""
    return all(_sign(v) > 0 for v in leading_minors(M))


def to_float(M) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in M], dtype=float)
