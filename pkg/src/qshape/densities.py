"""Carefree sieve, residue densities and the weights alpha, psi, psi_*, psi_tau."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import factor, is_probable_prime, is_squarefree, primes_up_to
from .errors import InvalidTau
from .fields import TYPE_RESIDUES, Type

ZETA2 = math.pi**2 / 6

# modulus and accepted residues (mod that modulus) behind each M_*(b)
TYPE_MODULUS = {Type.I: 8, Type.II: 4, Type.III: 16, Type.IV: 32, Type.V: 32}
MODULUS_RESIDUES = {
    Type.I: (1,),
    Type.II: (2, 3),
    Type.III: (4, 5, 13),
    Type.IV: (12,),
    Type.V: (28,),
}

VALID_TAUS = tuple(t for t in range(32) if t % 8)


def check_tau(tau: int) -> int:
    t = tau % 32
    if t % 8 == 0:
        raise InvalidTau(f"tau={tau}: need 8 not dividing tau (mod 32)")
    return t


# -- carefree triples ------------------------------------------------------------


def is_l_carefree(a: int, b: int, c: int, l: int) -> bool:
    q = l * l
    return (a * b) % q != 0 and (b * c) % q != 0 and (c * a) % q != 0


def is_carefree(a: int, b: int, c: int) -> bool:
    """ab, bc and ca all squarefree."""
    return is_squarefree(a * b) and is_squarefree(b * c) and is_squarefree(c * a)


def carefree_density(l: int) -> Fraction:
    """Proportion of l-carefree triples in (Z/l^2)^3."""
    return (1 - Fraction(1, l)) ** 3 * (1 + Fraction(3, l))


def carefree_count_formula(l: int) -> int:
    return (l - 1) ** 3 * (l**3 + 3 * l**2)


def brute_force_A(l: int) -> int:
    """Exhaustive count of l-carefree triples in (Z/l^2)^3."""
    if l > 13 or not is_probable_prime(l) or l == 2:
        raise ValueError(f"brute force needs an odd prime <= 13, got {l}")
    q = l * l
    r = np.arange(q, dtype=np.int64)
    a, b, c = r[:, None, None], r[None, :, None], r[None, None, :]
    ok = ((a * b) % q != 0) & ((b * c) % q != 0) & ((c * a) % q != 0)
    return int(ok.sum())


# -- alpha and psi --------------------------------------------------------------


def alpha(n: int) -> float:
    if n < 1:
        raise ValueError("alpha needs n >= 1")
    v = n ** (-2.0 / 3.0)
    for p, e in factor(n):
        if e > 1:
            return 0.0
        v *= (p - 1) / (p + 1)
    return v


@lru_cache(maxsize=None)
def _alpha_table(n: int) -> np.ndarray:
    """alpha(k) for k = 0..n (index 0 unused)."""
    out = np.zeros(n + 1)
    if n >= 1:
        out[1:] = [alpha(k) for k in range(1, n + 1)]
    return out


def psi(x: float) -> float:
    n = math.floor(x)
    return math.fsum(_alpha_table(n)[1:]) if n >= 1 else 0.0


# -- residue counts ------------------------------------------------------------


def _pair_residues(b: int, modulus: int) -> np.ndarray:
    r = np.arange(modulus, dtype=np.int64)
    a, c = r[:, None], r[None, :]
    return (a * (b * b % modulus) * c**3) % modulus


@lru_cache(maxsize=None)
def n_tau_vector(b: int) -> tuple[int, ...]:
    """n_tau(b) for every tau mod 32 (entries at 8 | tau included)."""
    return tuple(int(v) for v in np.bincount(_pair_residues(b, 32).ravel(), minlength=32))


def n_tau(b: int, tau: int) -> int:
    """#{(a, c) mod 32 : a b^2 c^3 = tau (mod 32)}."""
    return n_tau_vector(b)[check_tau(tau)]


@lru_cache(maxsize=None)
def M_star(typ: Type | str, b: int) -> Fraction:
    typ = Type(typ)
    mod = TYPE_MODULUS[typ]
    res = _pair_residues(b, mod)
    hits = int(np.isin(res, MODULUS_RESIDUES[typ]).sum())
    return Fraction(hits, mod * mod)


def psi_star(typ: Type | str, x: float) -> float:
    typ = Type(typ)
    n = math.floor(x)
    al = _alpha_table(max(n, 0))
    return math.fsum(float(M_star(typ, k)) * al[k] for k in range(1, n + 1))


def psi_tau(tau: int, x: float) -> float:
    t = check_tau(tau)
    n = math.floor(x)
    al = _alpha_table(max(n, 0))
    return math.fsum(n_tau_vector(k)[t] * al[k] for k in range(1, n + 1))


def mu_hat_box(rect) -> float:
    """Mass of [R1lo, R1hi] x [R2lo, R2hi] under (dx1/x1) alpha(floor x2) dx2, halved.

    The second factor sums alpha(b) over integers b in the closed range, so a box
    starting at R2lo = 1 gives the W(R1, R2) value 0.5 log R1 psi(R2).
    """
    b_lo = math.ceil(rect.R2lo) - 1
    return 0.5 * (math.log(rect.R1hi) - math.log(rect.R1lo)) * (psi(rect.R2hi) - psi(b_lo))


# -- predictions ----------------------------------------------------------------


def c_tau_constant(tau: int, R1: float, R2: float) -> float:
    """Limit of C^tau(N, R1, R2)/N as stated with n_tau and alpha."""
    return math.log(R1) * psi_tau(tau, R2) / (2048 * ZETA2)


@lru_cache(maxsize=None)
def _odd_euler_product(limit: int) -> float:
    ls = primes_up_to(limit)[1:].astype(float)
    return float(np.exp(np.sum(np.log1p(-3 / ls**2 + 2 / ls**3))))


def _two_adic_density(b: int, residues, sign: int = 1) -> Fraction:
    """Share of (a, c) mod 32 that are 2-carefree with sign * a b^2 c^3 in ``residues``."""
    r = np.arange(32, dtype=np.int64)
    a, c = r[:, None], r[None, :]
    ok = ((a * b) % 4 != 0) & ((b * c) % 4 != 0) & ((c * a) % 4 != 0)
    ok &= np.isin((sign * a * (b * b) * c**3) % 32, list(residues))
    return Fraction(int(ok.sum()), 1024)


def sieve_density(residues, r1lo: float, r1hi: float, bs, sign: int = 1,
                  prime_limit: int = 10**6) -> float:
    """Limiting count / N of carefree triples with a/c in (r1lo, r1hi], b in ``bs``.

    For fixed squarefree b, an odd prime l not dividing b keeps (a, c) with
    probability 1 - 3/l^2 + 2/l^3; for l | b the factor is (1 - 1/l)^2. The
    prime 2 and the residue condition are handled by counting mod 32.
    """
    base = _odd_euler_product(prime_limit)
    terms = []
    for b in bs:
        if not is_squarefree(b):
            continue
        v = b ** (-2.0 / 3.0) * float(_two_adic_density(b, residues, sign)) * base
        for p, _ in factor(b):
            if p > 2:
                v *= (1 - 1 / p) ** 2 / (1 - 3 / p**2 + 2 / p**3)
        terms.append(v)
    return 0.5 * (math.log(r1hi) - math.log(r1lo)) * math.fsum(terms)


def sieve_density_constant(tau: int, R1: float, R2: float, prime_limit: int = 10**6) -> float:
    """Sieve counterpart of :func:`c_tau_constant`."""
    t = check_tau(tau)
    return sieve_density((t,), 1.0, R1, range(1, math.floor(R2) + 1), 1, prime_limit)


def theorem_constant(typ: Type | str, r1lo: float, r1hi: float, r2lo: float, r2hi: float) -> float:
    typ = Type(typ)
    return (math.log(r1hi) - math.log(r1lo)) * (psi_star(typ, r2hi) - psi_star(typ, r2lo)) / (2 * ZETA2)


@dataclass(frozen=True)
class DensityTable:
    """Precomputed M_*(b), n_tau(b) for b <= B and carefree densities for odd l <= L."""

    B: int
    L: int
    m_star: dict = field(repr=False)
    n_tau: dict = field(repr=False)
    d_l: dict = field(repr=False)

    @classmethod
    def build(cls, B: int = 50, L: int = 13) -> DensityTable:
        ms = {t: tuple(M_star(t, b) for b in range(1, B + 1)) for t in Type}
        nt = {tau: tuple(n_tau_vector(b)[tau] for b in range(1, B + 1)) for tau in VALID_TAUS}
        dl = {int(p): carefree_density(int(p)) for p in primes_up_to(L)[1:]}
        return cls(B, L, ms, nt, dl)

    def reconciliation_failures(self) -> list[tuple[Type, int, int, Fraction]]:
        """(type, b, sum of n_tau, 1024 M_*) wherever the two disagree, squarefree b only."""
        bad = []
        for typ in Type:
            for b in range(1, self.B + 1):
                if not is_squarefree(b):
                    continue
                lhs = sum(self.n_tau[t][b - 1] for t in TYPE_RESIDUES[typ])
                rhs = 1024 * self.m_star[typ][b - 1]
                if lhs != rhs:
                    bad.append((typ, b, lhs, rhs))
        return bad
