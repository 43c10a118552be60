"""Siegel modular forms built from the 36 even theta constants, and Sp(2g, Z) utilities."""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd

import gmpy2
from gmpy2 import mpc

from .characteristics import (
    BranchSet,
    EtaMap,
    HalfCharacteristic,
    azygetic_sextuples,
    enumerate_even,
    quadruples,
    sym_diff,
    u_eta,
)
from .numerics.linalg import ComplexMatrix, int_det, int_matmul, int_transpose
from .numerics.mp import log2_abs, working
from .theta import PeriodPoint

CONVENTIONS = ("table1", "normalized")
H4_DEN = 8
ALPHA12_DEN = 72


class NotHyperellipticError(ValueError):
    pass


def _prec_of(values) -> int:
    return min(int(v.precision[0]) for v in values)


def _check36(thetas):
    if len(thetas) != 36:
        raise ValueError("expected the 36 even theta constants")


def sigma140(thetas) -> mpc:
    """sum_i prod_{j != i} theta_j^8 via prefix and suffix products (no subtraction)."""
    _check36(thetas)
    with working(_prec_of(thetas)):
        p8 = [t**8 for t in thetas]
        n = len(p8)
        pre = [mpc(1)] * (n + 1)
        for i in range(n):
            pre[i + 1] = pre[i] * p8[i]
        suf = mpc(1)
        total = mpc(0)
        for i in reversed(range(n)):
            total += pre[i] * suf
            suf *= p8[i]
        return total


def elementary_symmetric(values, k: int) -> mpc:
    """e_k of the values by the standard O(nk) recurrence."""
    with working(_prec_of(values)):
        e = [mpc(1)] + [mpc(0)] * k
        for v in values:
            for j in range(k, 0, -1):
                e[j] += e[j - 1] * v
        return e[k]


def sigma140_direct(thetas) -> mpc:
    """e_35 of the eighth powers, as a second algorithm for Sigma_140."""
    _check36(thetas)
    with working(_prec_of(thetas)):
        return elementary_symmetric([t**8 for t in thetas], 35)


def chi18(thetas) -> mpc:
    _check36(thetas)
    with working(_prec_of(thetas)):
        out = mpc(1)
        for t in thetas:
            out *= t
        return out


def _conv(convention: str):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    return convention == "normalized"


def h4(thetas, convention: str = "table1") -> mpc:
    _check36(thetas)
    norm = _conv(convention)
    with working(_prec_of(thetas)):
        s = sum((t**8 for t in thetas), mpc(0))
        return s / H4_DEN if norm else s


def alpha12(thetas, sextuples=None, convention: str = "table1") -> mpc:
    """sum over azygetic sextuples of (theta_1 ... theta_6)^4."""
    _check36(thetas)
    norm = _conv(convention)
    sextuples = azygetic_sextuples(3) if sextuples is None else sextuples
    if not sextuples:
        raise ValueError("empty sextuple list")
    with working(_prec_of(thetas)):
        t4 = [t**4 for t in thetas]
        s = mpc(0)
        for sx in sextuples:
            p = mpc(1)
            for i in sx:
                p *= t4[i]
            s += p
        return s / ALPHA12_DEN if norm else s


@dataclass(frozen=True)
class FormValues:
    sigma140: mpc
    chi18: mpc
    h4: mpc
    alpha12: mpc
    convention: str


WEIGHTS = {"sigma140": 140, "chi18": 18, "h4": 4, "alpha12": 12}


def form_values(thetas, convention: str = "table1") -> FormValues:
    return FormValues(sigma140(thetas), chi18(thetas), h4(thetas, convention=convention),
                      alpha12(thetas, convention=convention), convention)


def weight_zero_exponents(k: int) -> tuple[int, int]:
    """(a, b) with a = 140/gcd(k,140), b = k/gcd(k,140), so f^a / Sigma_140^b has weight 0."""
    if k <= 0 or k % 2:
        raise ValueError("weight must be a positive even integer")
    d = gcd(k, 140)
    return 140 // d, k // d


def sigma_scale(thetas) -> float:
    """log2 of the largest term prod_{j != i} |theta_j|^8 of Sigma_140."""
    logs = sorted((log2_abs(t) for t in thetas), reverse=True)
    return 8 * sum(logs[:-1])


def is_sigma_vanishing(thetas, sigma=None, threshold_bits: int | None = None) -> bool:
    """True if Sigma_140 is zero relative to its largest term (two or more thetas vanish)."""
    prec = _prec_of(thetas)
    thr = threshold_bits if threshold_bits is not None else prec // 2
    sigma = sigma140(thetas) if sigma is None else sigma
    return sigma == 0 or log2_abs(sigma) < sigma_scale(thetas) - thr


def modular_invariants(thetas, convention: str = "table1"):
    """(j1, j2, j3) = (h4^35 / S, alpha12^35 / S^3, h4^5 alpha12^10 / S) with S = Sigma_140."""
    _check36(thetas)
    fv = form_values(thetas, convention)
    if is_sigma_vanishing(thetas, fv.sigma140):
        raise NotHyperellipticError("not a hyperelliptic period matrix")
    with working(_prec_of(thetas)):
        s = fv.sigma140
        a, b = weight_zero_exponents(4)
        j1 = fv.h4**a / s**b
        a, b = weight_zero_exponents(12)
        j2 = fv.alpha12**a / s**b
        j3 = fv.h4**5 * fv.alpha12**10 / s
    return j1, j2, j3


# -- eta products -------------------------------------------------------------


def phi_eta(thetas_by_char: dict, eta: EtaMap, U=None) -> mpc:
    """prod over the 70 four-element T in B of theta[eta_{T o U}]^4."""
    U = u_eta(eta) if U is None else frozenset(U)
    vals = []
    for T in quadruples():
        xi = eta(BranchSet(sym_diff(T, U)))
        if xi not in thetas_by_char:
            raise KeyError(f"missing theta value for characteristic {xi}")
        vals.append(thetas_by_char[xi])
    with working(_prec_of(vals)):
        out = mpc(1)
        for v in vals:
            out *= v**4
        return out


def thetas_by_char(thetas) -> dict:
    return dict(zip(enumerate_even(3), thetas))


# -- symplectic group ---------------------------------------------------------


def _blocks(M, g):
    return ([r[:g] for r in M[:g]], [r[g:] for r in M[:g]], [r[:g] for r in M[g:]], [r[g:] for r in M[g:]])


def standard_J(g: int):
    J = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        J[i][g + i] = 1
        J[g + i][i] = -1
    return J


@dataclass(frozen=True)
class SymplecticMatrix:
    A: tuple
    B: tuple
    C: tuple
    D: tuple

    def __post_init__(self):
        for name in "ABCD":
            object.__setattr__(self, name, tuple(tuple(int(x) for x in r) for r in getattr(self, name)))
        M = self.full()
        J = standard_J(self.g)
        if int_matmul(int_matmul(int_transpose(M), J), M) != J:
            raise ValueError("matrix is not symplectic")

    @property
    def g(self) -> int:
        return len(self.A)

    @classmethod
    def from_full(cls, M) -> SymplecticMatrix:
        g = len(M) // 2
        return cls(*_blocks([list(r) for r in M], g))

    @classmethod
    def identity(cls, g: int = 3) -> SymplecticMatrix:
        return cls.from_full([[int(i == j) for j in range(2 * g)] for i in range(2 * g)])

    def full(self):
        top = [list(a) + list(b) for a, b in zip(self.A, self.B)]
        bot = [list(c) + list(d) for c, d in zip(self.C, self.D)]
        return top + bot

    def __matmul__(self, other: SymplecticMatrix) -> SymplecticMatrix:
        return SymplecticMatrix.from_full(int_matmul(self.full(), other.full()))

    def inverse(self) -> SymplecticMatrix:
        # M^-1 = J^-1 M^T J = (D^T -B^T; -C^T A^T)
        At, Bt, Ct, Dt = (int_transpose(x) for x in (self.A, self.B, self.C, self.D))
        neg = lambda m: [[-x for x in r] for r in m]
        return SymplecticMatrix(Dt, neg(Bt), neg(Ct), At)


def translation(S) -> SymplecticMatrix:
    g = len(S)
    I = [[int(i == j) for j in range(g)] for i in range(g)]
    Z = [[0] * g for _ in range(g)]
    return SymplecticMatrix(I, S, Z, I)


def basis_change(U) -> SymplecticMatrix:
    """diag(U, U^-T) for unimodular U."""
    g = len(U)
    if abs(int_det(U)) != 1:
        raise ValueError("U must be unimodular")
    # U^-T via adjugate: U^-1 = adj(U)/det
    from fractions import Fraction

    det = int(int_det(U))
    inv = [[0] * g for _ in range(g)]
    for i in range(g):
        for j in range(g):
            minor = [[U[r][c] for c in range(g) if c != j] for r in range(g) if r != i]
            inv[j][i] = int(Fraction((-1) ** (i + j) * int_det(minor), det)) if g > 1 else int(Fraction(1, det))
    Zr = [[0] * g for _ in range(g)]
    return SymplecticMatrix(U, Zr, Zr, int_transpose(inv))


def full_inversion(g: int = 3) -> SymplecticMatrix:
    I = [[int(i == j) for j in range(g)] for i in range(g)]
    Zr = [[0] * g for _ in range(g)]
    return SymplecticMatrix(Zr, [[-x for x in r] for r in I], I, Zr)


def partial_inversion(k: int, g: int = 3) -> SymplecticMatrix:
    """The SL2 inversion z -> -1/z embedded on coordinate k."""
    A = [[int(i == j and i != k) for j in range(g)] for i in range(g)]
    B = [[-int(i == j == k) for j in range(g)] for i in range(g)]
    C = [[int(i == j == k) for j in range(g)] for i in range(g)]
    return SymplecticMatrix(A, B, C, A)


def random_symplectic(g: int = 3, rng: random.Random | None = None, steps: int = 3, size: int = 1) -> SymplecticMatrix:
    """Product of a few random generators: translations, basis changes and inversions."""
    rng = rng or random.Random()
    M = SymplecticMatrix.identity(g)
    for _ in range(steps):
        kind = rng.randrange(4)
        if kind == 0:
            S = [[0] * g for _ in range(g)]
            for i in range(g):
                for j in range(i, g):
                    S[i][j] = S[j][i] = rng.randint(-size, size)
            G = translation(S)
        elif kind == 1:
            U = [[int(i == j) for j in range(g)] for i in range(g)]
            i, j = rng.sample(range(g), 2)
            U[i][j] = rng.choice([-1, 1]) * rng.randint(1, size)
            G = basis_change(U)
        elif kind == 2:
            G = full_inversion(g)
        else:
            G = partial_inversion(rng.randrange(g), g)
        M = G @ M
    return M


def symplectic_action(M: SymplecticMatrix, P: PeriodPoint):
    """(M.Z, det(CZ + D)) with M.Z = (AZ + B)(CZ + D)^-1."""
    Z = P.Z
    prec = P.prec
    num = ComplexMatrix.from_rows(M.A, prec) @ Z + ComplexMatrix.from_rows(M.B, prec)
    den = ComplexMatrix.from_rows(M.C, prec) @ Z + ComplexMatrix.from_rows(M.D, prec)
    cocycle = den.det()
    if cocycle == 0 or log2_abs(cocycle) < -prec / 2:
        raise ArithmeticError("CZ + D is numerically singular")
    Zp = num @ den.inverse()
    return PeriodPoint.from_matrix(Zp.symmetrized(), prec), cocycle


def act_on_periods(M: SymplecticMatrix, omega1: ComplexMatrix, omega2: ComplexMatrix):
    """Transform (Omega1, Omega2) so that the new small period matrix is M.Z.

    Omega1' = Omega1 A^T + Omega2 B^T, Omega2' = Omega1 C^T + Omega2 D^T, so
    det Omega2' = det Omega2 * det(CZ + D).
    """
    At, Bt, Ct, Dt = (int_transpose(x) for x in (M.A, M.B, M.C, M.D))
    return omega1 @ At + omega2 @ Bt, omega1 @ Ct + omega2 @ Dt
