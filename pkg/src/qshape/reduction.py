"""Rank-3 shapes: Iwasawa coordinates, the Minkowski domain and GL3(Z) reduction.

A shape is the class of a positive definite 3x3 Gram matrix under
``g -> s * u.T @ g @ u`` with ``s > 0`` and ``u`` in GL3(Z). Matrices are
scaled to determinant one before any comparison.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotPositiveDefinite, ReductionFailure
from .quadratic import to_float

BOUNDARY_TOL = 1e-9
EQUIV_TOL = 1e-8
LLL_DELTA = 0.999


@dataclass(frozen=True)
class IwasawaCoords:
    x1: float
    x2: float
    x3: float
    y1: float
    y2: float

    @property
    def y3(self) -> float:
        return 1.0 / (self.y1 * self.y2)

    def matrix(self) -> np.ndarray:
        """Rebuild Y = N^T diag(y1, y2, y3) N."""
        N = np.array([[1, self.x1, self.x2], [0, 1, self.x3], [0, 0, 1.0]])
        return N.T @ np.diag([self.y1, self.y2, self.y3]) @ N


def as_matrix(g) -> np.ndarray:
    if isinstance(g, np.ndarray):
        return g.astype(float)
    if isinstance(g, (list, tuple)) and g and not isinstance(g[0][0], (int, float)):
        return to_float(g)
    return np.asarray(g, dtype=float)


def normalize(g) -> np.ndarray:
    """Scale to determinant one (the representative in H_3)."""
    g = as_matrix(g)
    dt = np.linalg.det(g)
    if not dt > 0:
        raise NotPositiveDefinite(f"determinant {dt} is not positive")
    return g / dt ** (1.0 / 3.0)


def _check_pd(g: np.ndarray) -> None:
    if not np.allclose(g, g.T, rtol=1e-12, atol=0):
        raise NotPositiveDefinite("matrix is not symmetric")
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite("matrix is not positive definite") from None


def iwasawa(g) -> IwasawaCoords:
    g = as_matrix(g)
    _check_pd(g)
    Y = normalize(g)
    y1 = Y[0, 0]
    x1 = Y[0, 1] / y1
    x2 = Y[0, 2] / y1
    y2 = Y[1, 1] - y1 * x1 * x1
    x3 = (Y[1, 2] - y1 * x1 * x2) / y2
    return IwasawaCoords(float(x1), float(x2), float(x3), float(y1), float(y2))


_E_VECTORS = np.array(list(itertools.product((1, -1), repeat=3)), dtype=float)


def _f3_violation(Y: np.ndarray) -> float:
    """Largest violation of the Minkowski inequalities (<= 0 inside)."""
    y11, y22, y33 = Y[0, 0], Y[1, 1], Y[2, 2]
    y12, y13, y23 = Y[0, 1], Y[0, 2], Y[1, 2]
    checks = [
        y11 - y22,
        y22 - y33,
        -y12,
        y12 - y11 / 2,
        -y23,
        y23 - y22 / 2,
        abs(y13) - y11 / 2,
    ]
    quad = np.einsum("ki,ij,kj->k", _E_VECTORS, Y, _E_VECTORS)
    checks.append(float(np.max(y33 - quad)))
    return max(checks)


def in_F3(g, tol: float = BOUNDARY_TOL) -> bool:
    """Membership in Minkowski's domain after scaling to determinant one.

    ``tol`` is absolute on the normalized matrix, whose entries are O(1)
    for reasonably shaped lattices.
    """
    Y = normalize(g)
    return bool(_f3_violation(Y) <= tol * max(1.0, float(np.max(np.abs(Y)))))


def fd_inequalities(c: IwasawaCoords) -> bool:
    """The Iwasawa-coordinate consequences of membership (necessary conditions)."""
    x1, x2, x3, y1, y2 = c.x1, c.x2, c.x3, c.y1, c.y2
    eps = 1e-12
    fd1 = (
        -eps <= x1 <= 0.5 + eps
        and abs(x2) <= 0.5 + eps
        and -eps <= y1 * x1 * x2 + y2 * x3 <= 0.5 * (y1 * x1 * x1 + y2) + eps
    )
    fd2 = -0.25 * y1 / y2 - eps <= x3 <= 0.5 + 0.375 * y1 / y2 + eps
    return fd1 and fd2


# -- reduction -------------------------------------------------------------------


def lll_gram(g: np.ndarray, delta: float = LLL_DELTA) -> np.ndarray:
    """LLL on a Gram matrix; returns integer U with columns the new basis."""
    n = len(g)
    U = np.eye(n, dtype=np.int64)
    G = g.copy()

    def gso(G):
        L = np.linalg.cholesky(G)  # G = L L^T
        B = np.diag(L) ** 2
        mu = L / np.diag(L)[None, :]
        return mu, B

    k = 1
    for _ in range(10000):
        if k >= n:
            return U
        mu, B = gso(G)
        for j in range(k - 1, -1, -1):
            q = int(np.rint(mu[k, j]))
            if q:
                U[:, k] -= q * U[:, j]
                G = U.T @ g @ U
                mu, B = gso(G)
        if B[k] >= (delta - mu[k, k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            U[:, [k - 1, k]] = U[:, [k, k - 1]]
            G = U.T @ g @ U
            k = max(k - 1, 1)
    raise ReductionFailure("LLL did not terminate")


@lru_cache(maxsize=None)
def _box_vectors(r: int) -> np.ndarray:
    vs = np.array(list(itertools.product(range(-r, r + 1), repeat=3)), dtype=np.int64)
    return vs[np.any(vs != 0, axis=1)]


@lru_cache(maxsize=None)
def small_unimodular(r: int = 1) -> np.ndarray:
    """All 3x3 integer matrices with entries in [-r, r] and det +-1."""
    vals = np.arange(-r, r + 1)
    grid = np.array(np.meshgrid(*([vals] * 9), indexing="ij")).reshape(9, -1).T
    M = grid.reshape(-1, 3, 3)
    d = np.rint(np.linalg.det(M)).astype(np.int64)
    return M[np.abs(d) == 1]


def _greedy_step(G: np.ndarray) -> np.ndarray:
    """Successive-minima basis chosen from the box [-2, 2]^3."""
    vs = _box_vectors(2)
    norms = np.einsum("ki,ij,kj->k", vs, G, vs)
    order = np.lexsort((np.arange(len(vs)), norms))
    b1 = vs[order[0]]
    b2 = None
    for idx in order[1:]:
        v = vs[idx]
        cr = np.cross(b1, v)
        if np.any(cr) and np.gcd.reduce(np.abs(cr)) == 1:
            b2 = v
            break
    for idx in order[1:]:
        v = vs[idx]
        if abs(int(round(np.linalg.det(np.array([b1, b2, v]).T)))) == 1:
            return np.array([b1, b2, v]).T
    raise ReductionFailure("no completing vector in the search box")


def _sign_normalize(U: np.ndarray, G0: np.ndarray) -> np.ndarray:
    U = U.copy()
    G = U.T @ G0 @ U
    if G[0, 1] < 0:
        U[:, 1] *= -1
        G = U.T @ G0 @ U
    if G[1, 2] < 0:
        U[:, 2] *= -1
    return U


def _canonical_key(Y: np.ndarray) -> tuple:
    iu = np.triu_indices(3)
    return tuple(np.round(Y[iu], 9))


def minkowski_reduce(g, tol: float = BOUNDARY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Reduce ``g`` into the Minkowski domain.

    Returns ``(reduced, u)`` with ``u.T @ g @ u = s * reduced`` for some
    ``s > 0``; ``reduced`` has determinant one. Ties on the domain boundary
    are broken by lexicographic minimality of the rounded upper triangle.
    """
    g = as_matrix(g)
    _check_pd(g)
    g0 = normalize(g)
    U = lll_gram(g0)
    for _ in range(50):
        G = U.T @ g0 @ U
        step = _greedy_step(G)
        newG = step.T @ G @ step
        U = U @ step
        if np.allclose(np.diag(newG), np.diag(G), rtol=1e-13, atol=0):
            break
    U = _sign_normalize(U, g0)
    Y = U.T @ g0 @ U
    scale = max(1.0, float(np.max(np.abs(Y))))
    if _f3_violation(Y) > tol * scale:
        raise ReductionFailure(f"reduction left the domain: {Y.tolist()}")
    # canonical representative among boundary ties
    W = small_unimodular(1)
    cands = np.einsum("kji,jl,klm->kim", W, Y, W)
    best_key, best = _canonical_key(Y), np.eye(3, dtype=np.int64)
    near = np.abs(np.einsum("kii->ki", cands) - np.diag(Y)[None, :]).max(axis=1) <= 1e-6 * scale
    for k in np.flatnonzero(near):
        C = cands[k]
        if _f3_violation(C) <= tol * scale:
            key = _canonical_key(C)
            if key < best_key:
                best_key, best = key, W[k]
    U = U @ best
    return U.T @ g0 @ U, U


def shapes_equivalent(g1, g2, tol: float = EQUIV_TOL) -> bool:
    """Whether two positive definite forms define the same shape."""
    R1, _ = minkowski_reduce(g1)
    R2, _ = minkowski_reduce(g2)
    scale = max(1.0, float(np.max(np.abs(R1))))
    if np.max(np.abs(R1 - R2)) <= tol * scale:
        return True
    W = small_unimodular(1)
    cands = np.einsum("kji,jl,klm->kim", W, R2, W)
    diffs = np.abs(cands - R1[None]).reshape(len(W), -1).max(axis=1)
    return bool(np.min(diffs) <= tol * scale)


def successive_minima(g, box: int = 6) -> np.ndarray:
    """Squared successive minima by brute force over a coefficient box.

    Independent of the reduction code; used as an invariant of the shape.
    """
    g = normalize(g)
    vs = _box_vectors(box)
    norms = np.einsum("ki,ij,kj->k", vs, g, vs)
    order = np.argsort(norms, kind="stable")
    chosen: list[np.ndarray] = []
    out = []
    for idx in order:
        v = vs[idx]
        if np.linalg.matrix_rank(np.array(chosen + [v])) == len(chosen) + 1:
            chosen.append(v)
            out.append(norms[idx])
            if len(chosen) == 3:
                break
    return np.array(out)
