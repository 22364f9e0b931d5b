"""Gram matrices of rings of integers of pure quartic fields.

Exact entries live in Q(sqrt(|a| c)), where (a, b, c) is the funakura form.
The floating route in :func:`gram_numeric` evaluates the integral basis in
the four complex embeddings and is kept independent of the change-of-basis
matrices used by :func:`gram`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import FactorizationMismatch
from .fields import FieldClass, PureQuarticField, Type, pure_quartic_field
from .quadratic import QuadraticReal, det, to_float

F = Fraction
H = F(1, 2)
Q = F(1, 4)


def _as_field(f) -> PureQuarticField:
    return pure_quartic_field(f) if isinstance(f, int) else f


def radicand(f: PureQuarticField) -> int:
    a, _, c = f.funakura_form
    return abs(a) * c


def gram_typeII(f) -> list[list[QuadraticReal]]:
    """diag(4, 4|alpha|^2, 4|beta|^2, 4|gamma|^2) in the basis (1, alpha, beta, gamma)."""
    f = _as_field(f)
    a, b, c = f.funakura_form
    d = abs(a) * c
    diag = [
        QuadraticReal(4, 0, d),
        QuadraticReal(4 * abs(a) * c, 0, d),
        QuadraticReal(0, 4 * b * c, d),
        QuadraticReal(0, 4 * abs(a) * b, d),
    ]
    zero = QuadraticReal(0, 0, d)
    return [[diag[i] if i == j else zero for j in range(4)] for i in range(4)]


def change_of_basis(cls: FieldClass | Type, a: int, b: int) -> list[list[Fraction]]:
    """Rows give the integral basis (1, lambda, mu, nu) over (1, alpha, beta, gamma)."""
    typ = cls.typ if isinstance(cls, FieldClass) else Type(cls)
    one, zero = F(1), F(0)
    if typ is Type.I:
        return [[one, zero, zero, zero], [H, H, zero, zero], [zero, zero, one, zero],
                [F(a * b, 4), Q, F(b, 4), Q]]
    if typ is Type.II:
        return [[one if i == j else zero for j in range(4)] for i in range(4)]
    if typ is Type.III:
        return [[one, zero, zero, zero], [H, H, zero, zero], [zero, zero, one, zero],
                [zero, zero, H, H]]
    if typ is Type.IV:
        return [[one, zero, zero, zero], [zero, one, zero, zero], [H, H, H, zero],
                [zero, zero, H, H]]
    return [[one, zero, zero, zero], [zero, one, zero, zero], [H, H, H, zero],
            [zero, H, F(b, 8), Q]]


def _congruence_diag(C, diag):
    # C . diag(p) . C^T for rational C and QuadraticReal p
    n = len(C)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            s = diag[0] * (C[i][0] * C[j][0])
            for k in range(1, len(diag)):
                w = C[i][k] * C[j][k]
                if w:
                    s = s + diag[k] * w
            out[i][j] = out[j][i] = s
    return out


def gram(f) -> list[list[QuadraticReal]]:
    """Exact 4x4 Gram matrix of O_K in the integral basis of its type."""
    f = _as_field(f)
    a, b, _ = f.funakura_form
    P = gram_typeII(f)
    C = change_of_basis(f.cls, a, b)
    return _congruence_diag(C, [P[k][k] for k in range(4)])


# -- independent floating route ------------------------------------------------


def _basis_values(typ: Type, a: int, b: int, c: int, beta: np.ndarray) -> list[np.ndarray]:
    """Integral basis elements evaluated at conjugates ``beta`` of m^(1/4)."""
    alpha = beta**2 / (b * c)
    gamma = beta**3 / (b * c * c)
    one = np.ones_like(beta)
    if typ is Type.I:
        return [one, (1 + alpha) / 2, beta, (a * b + alpha + b * beta + gamma) / 4]
    if typ is Type.II:
        return [one, alpha, beta, gamma]
    if typ is Type.III:
        return [one, (1 + alpha) / 2, beta, (beta + gamma) / 2]
    if typ is Type.IV:
        return [one, alpha, (1 + alpha + beta) / 2, (beta + gamma) / 2]
    return [one, alpha, (1 + alpha + beta) / 2, (4 * alpha + b * beta + 2 * gamma) / 8]


def embeddings(m: int) -> np.ndarray:
    """The four roots of X^4 - m: beta_0 * i^k with arg(beta_0) = 0 or pi/4."""
    r = abs(m) ** 0.25
    beta0 = r if m > 0 else r * np.exp(1j * np.pi / 4)
    return beta0 * np.array([1, 1j, -1, -1j])


def basis_embedding_matrix(f) -> np.ndarray:
    """Row i holds j(e_i), the i-th basis element under the four embeddings."""
    f = _as_field(f)
    a, b, c = f.funakura_form
    beta = embeddings(f.funakura_m).astype(complex)
    return np.array(_basis_values(f.typ, a, b, c, beta))


def gram_numeric(f) -> np.ndarray:
    """Gram matrix from the Hermitian pairing of the embedded basis."""
    J = basis_embedding_matrix(f)
    return (J @ J.conj().T).real


def basis_is_integral(f, tol: float = 1e-6) -> bool:
    """Check every basis element has an integral characteristic polynomial."""
    J = basis_embedding_matrix(f)
    for row in J:
        coeffs = np.poly(row)
        if np.max(np.abs(coeffs.imag)) > tol * max(1.0, np.max(np.abs(coeffs))):
            return False
        re = coeffs.real
        if np.max(np.abs(re - np.round(re)) / np.maximum(1.0, np.abs(re))) > tol:
            return False
    return True


# -- projection and torus structure -------------------------------------------


def project_perp(g, basis_coeffs=None):
    """Gram of basis elements 2..4 projected orthogonally to the first (= 1)."""
    if basis_coeffs is not None:
        first = basis_coeffs[0]
        if list(first) != [1, 0, 0, 0]:
            raise ValueError("first basis element must be 1")
    g11 = g[0][0]
    out = []
    for i in range(1, 4):
        row = []
        for j in range(1, 4):
            row.append(g[i][j] - g[i][0] * g[0][j] / g11)
        out.append(row)
    return out


def gram_perp(f):
    return project_perp(gram(_as_field(f)))


def torus_form(f):
    """4|a|bc * C' . diag(1/b, sqrt(c/|a|), sqrt(|a|/c)) . C'^T over Q(sqrt(|a|c))."""
    f = _as_field(f)
    a, b, c = f.funakura_form
    d = abs(a) * c
    C = change_of_basis(f.cls, a, b)
    Cp = [row[1:] for row in C[1:]]
    # sqrt(c/|a|) = sqrt(d)/|a|, sqrt(|a|/c) = sqrt(d)/c
    diag = [
        QuadraticReal(F(1, b), 0, d),
        QuadraticReal(0, F(1, abs(a)), d),
        QuadraticReal(0, F(1, c), d),
    ]
    scale = 4 * abs(a) * b * c
    return [[v * scale for v in row] for row in _congruence_diag(Cp, diag)]


def torus_factorization_check(f, raise_on_mismatch: bool = False) -> bool:
    f = _as_field(f)
    G3 = gram_perp(f)
    T = torus_form(f)
    for i in range(3):
        for j in range(3):
            if G3[i][j] != T[i][j]:
                if raise_on_mismatch:
                    raise FactorizationMismatch(f.m, (i + 1, j + 1), G3[i][j], T[i][j])
                return False
    return True


def shape_params(nf) -> tuple[float, Fraction, Fraction]:
    """(lambda1, lambda1^2, lambda2) from a counting normal form.

    lambda1 = sqrt(c/|a|) as a float, its exact square, and lambda2 = 1/b.
    """
    if isinstance(nf, int):
        nf = pure_quartic_field(nf).counting_form
    a, b, c = nf
    if abs(a) < c:
        raise ValueError(f"{nf} is not in counting form (|a| >= c)")
    l1sq = F(c, abs(a))
    return float(l1sq) ** 0.5, l1sq, F(1, b)


def gram_determinant(f) -> Fraction:
    """Exact det of the 4x4 Gram matrix; always rational."""
    v = det(gram(_as_field(f)))
    if isinstance(v, QuadraticReal):
        if v.y:
            raise ArithmeticError(f"irrational Gram determinant {v}")
        return v.x
    return v


@dataclass(frozen=True)
class ShapeDescriptor:
    m: int
    lambda1: float
    lambda1_sq: Fraction
    lambda2: Fraction
    iwasawa: object
    in_domain: bool
    gram3: np.ndarray = field(repr=False)
    reduced: np.ndarray = field(repr=False)
    unimodular: np.ndarray = field(repr=False)


def shape(f) -> ShapeDescriptor:
    """Projected Gram, its Iwasawa coordinates and a reduced representative."""
    from .reduction import in_F3, iwasawa, minkowski_reduce

    f = _as_field(f)
    G3 = to_float(gram_perp(f))
    reduced, u = minkowski_reduce(G3)
    l1, l1sq, l2 = shape_params(f.counting_form)
    return ShapeDescriptor(f.m, l1, l1sq, l2, iwasawa(reduced), in_F3(reduced), G3, reduced, u)
