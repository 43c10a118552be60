"""Theta constants with half-integer characteristics.

Two summation routes are provided. ``all_theta_constants`` evaluates all 64
characteristics in one pass per top vector, summing exp(pi i m^T Z m) over an
ellipsoid in Z^g + a/2, split by the class of m - a/2 mod 2 and halved by the
symmetry m -> -m. ``theta_series`` is a plain cube summation for one
(possibly unreduced) characteristic and is used as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .characteristics import HalfCharacteristic, enumerate_all, enumerate_even, parity
from .numerics.linalg import ComplexMatrix, lambda_min_lower_bound
from .numerics.mp import log2_abs, working

GUARD = 40
LN2 = math.log(2.0)


class NotInSiegelSpaceError(ValueError):
    pass


@dataclass(frozen=True)
class PeriodPoint:
    g: int
    Z: ComplexMatrix
    prec: int

    def __post_init__(self):
        if self.Z.rows != self.g or self.Z.cols != self.g:
            raise ValueError("Z must be g x g")
        asym = self.Z.asymmetry()
        if asym != 0 and log2_abs(asym) > -self.prec + 8 + max(log2_abs(self.Z.max_abs()), 0):
            raise ValueError("Z is not symmetric to working precision")
        lam = lambda_min_lower_bound(self.Z.imag_part())
        if lam <= 0:
            raise NotInSiegelSpaceError(f"not in Siegel space (lambda_min bound {lam:.3g})")

    @classmethod
    def from_matrix(cls, Z, prec: int | None = None) -> PeriodPoint:
        if not isinstance(Z, ComplexMatrix):
            Z = ComplexMatrix.from_rows(Z, prec or 128)
        prec = prec or Z.prec
        if Z.prec != prec:
            Z = Z.with_prec(prec)
        return cls(Z.rows, Z.symmetrized(), prec)

    @property
    def lambda_min(self) -> float:
        return lambda_min_lower_bound(self.Z.imag_part())


def _lam_or_raise(imZ) -> float:
    lam = lambda_min_lower_bound(imZ)
    if lam <= 0:
        raise NotInSiegelSpaceError("not in Siegel space")
    return lam


def tail_radius(imZ, target: int) -> int:
    """Cube radius R with sum_{|n|_inf > R} exp(-pi lam (|n|_inf - 1)^2) < 2^-target.

    The count of lattice points with |n|_inf = k is (2k+1)^g - (2k-1)^g, and
    lam is a certified lower bound for the smallest eigenvalue of Im Z.
    """
    g = len(imZ)
    lam = _lam_or_raise(imZ)
    limit = -target * LN2

    def log_tail(R):
        tot = -math.inf
        k = R + 1
        while True:
            cnt = (2 * k + 1) ** g - (2 * k - 1) ** g
            t = math.log(cnt) - math.pi * lam * (k - 1) ** 2
            tot = float(np.logaddexp(tot, t))
            if k > R + 3 and t < tot - 60:
                return tot
            k += 1

    R = max(1, int(math.sqrt(max(target * LN2 / (math.pi * lam), 0.0))))
    while R > 1 and log_tail(R - 1) < limit:
        R -= 1
    while log_tail(R) >= limit:
        R += 1
    return R


def _ellipsoid_radius2(lam: float, g: int, target: int) -> float:
    """r^2 such that sum over Q(m) > r^2 of exp(-pi Q(m)) < 2^-target.

    Uses exp(-pi Q) <= exp(-0.9 pi r^2) exp(-0.1 pi Q) outside the ellipsoid and
    sum_{k in Z+s} exp(-c k^2) <= 2 + sqrt(pi/c) per coordinate.
    """
    extra = g * math.log(2.0 + math.sqrt(10.0 / lam))
    return (target * LN2 + extra) / (0.9 * math.pi)


def _udu(y):
    """Q(m) = sum_i d_i (m_i + sum_{j>i} u_ij m_j)^2 for a 3x3 SPD float matrix."""
    g = len(y)
    a = [[float(y[i][j]) for j in range(g)] for i in range(g)]
    d = [0.0] * g
    u = [[0.0] * g for _ in range(g)]
    for i in range(g):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise NotInSiegelSpaceError("not in Siegel space")
        for j in range(i + 1, g):
            u[i][j] = a[i][j] / d[i]
        for j in range(i + 1, g):
            for k in range(i + 1, g):
                a[j][k] -= d[i] * u[i][j] * u[i][k]
    return d, u


def _half_range(center: float, radius2: float, d: float, parity_bit: int, slack: float):
    """Doubled integers M = 2m with M = parity mod 2 and d (m + center)^2 <= radius2."""
    if radius2 < 0:
        return range(0)
    w = math.sqrt(radius2 / d) + slack
    lo = math.ceil(2 * (-center - w))
    hi = math.floor(2 * (-center + w))
    if (lo - parity_bit) % 2:
        lo += 1
    return range(lo, hi + 1, 2)


class _Enumerator:
    """Shared setup for the ellipsoid summation at a given Z and target."""

    def __init__(self, P: PeriodPoint, target_bits: int):
        if P.g != 3:
            raise ValueError("batched evaluation is implemented for g = 3")
        self.P = P
        self.prec = P.prec + GUARD
        y = P.Z.imag_part()
        self.lam = _lam_or_raise(y)
        self.r2 = _ellipsoid_radius2(self.lam, 3, target_bits + GUARD)
        self.d, self.u = _udu(y)
        self.slack = 1e-9 * (1 + math.sqrt(self.r2))
        with working(self.prec):
            Z = P.Z.with_prec(self.prec)
            ipi = mpc(0, gmpy2.const_pi())
            # exponent of a term is sum_jk A_jk M_j M_k with M = 2m, A = pi i Z / 4
            self.A = [[ipi * Z[i, j] / 4 for j in range(3)] for i in range(3)]
            # m1 -> m1 + 1 changes M1 by 2; ratio exponent = A11 (4 M1 + 4) + 4 (A12 M2 + A13 M3)
            self.w = gmpy2.exp(8 * self.A[0][0])

    def row_prec(self, base_q: float) -> int:
        drop = int(math.pi * base_q / LN2)
        return max(self.prec - drop, 64)


def _sum_top(en: _Enumerator, a: tuple) -> list:
    """Half-space class sums S[c] (c in 0..7, bit i = n_i mod 2) for top vector a."""
    d, u, r2, slack = en.d, en.u, en.r2, en.slack
    A = en.A
    prec = en.prec
    S = [None] * 8
    with working(prec):
        zero = mpc(0)
        S = [zero] * 8
        w_full = en.w
    for M3 in _half_range(0.0, r2, d[2], a[2], slack):
        if M3 < 0:
            continue
        m3 = M3 / 2
        rem3 = r2 - d[2] * m3 * m3
        for M2 in _half_range(u[1][2] * m3, rem3, d[1], a[1], slack):
            if M3 == 0 and M2 < 0:
                continue
            m2 = M2 / 2
            base = d[2] * m3 * m3 + d[1] * (m2 + u[1][2] * m3) ** 2
            rem2 = r2 - base
            c1 = u[0][1] * m2 + u[0][2] * m3
            rng = _half_range(c1, rem2, d[0], a[0], slack)
            if M3 == 0 and M2 == 0:
                rng = [M for M in rng if M >= 0]
            if not rng:
                continue
            M1 = rng[0]
            p = en.row_prec(base)
            cls23 = ((((M2 - a[1]) // 2) & 1) << 1) | ((((M3 - a[2]) // 2) & 1) << 2)
            cl1 = ((M1 - a[0]) // 2) & 1
            with working(p):
                lin = A[0][1] * M2 + A[0][2] * M3
                e0 = (A[0][0] * M1 + 2 * lin) * M1 + (A[1][1] * M2 + 2 * A[1][2] * M3) * M2 + A[2][2] * M3 * M3
                q = gmpy2.exp(e0)
                r = gmpy2.exp(A[0][0] * (4 * M1 + 4) + 4 * lin)
                w = mpc(w_full)
                acc = [mpc(0), mpc(0)]
                n = len(rng)
                for k in range(n):
                    acc[cl1] += q
                    cl1 ^= 1
                    if k + 1 < n:
                        q *= r
                        r *= w
            with working(prec):
                S[cls23] += acc[0]
                S[cls23 | 1] += acc[1]
    return S


def all_theta_constants(P: PeriodPoint, target_bits: int | None = None) -> dict:
    """All 64 theta constants theta[xi](0, Z), keyed by characteristic index.

    Truncation error is below 2^-(target_bits) absolutely (default: P.prec).
    """
    target = target_bits or P.prec
    en = _Enumerator(P, target)
    prec = en.prec
    out = {}
    for ta in range(8):
        a = ((ta >> 2) & 1, (ta >> 1) & 1, ta & 1)
        S_half = _sum_top(en, a)
        abits = a[0] | (a[1] << 1) | (a[2] << 2)
        with working(prec):
            S = [S_half[c] + S_half[c ^ abits] for c in range(8)]
            if abits == 0:
                S[0] -= 1
            for tb in range(8):
                b = ((tb >> 2) & 1, (tb >> 1) & 1, tb & 1)
                bbits = b[0] | (b[1] << 1) | (b[2] << 2)
                tot = mpc(0)
                for c in range(8):
                    if bin(c & bbits).count("1") & 1:
                        tot -= S[c]
                    else:
                        tot += S[c]
                ab = sum(x & y for x, y in zip(a, b)) % 4
                tot = tot * (1, 1j, -1, -1j)[ab] if ab else tot
                out[(ta << 3) | tb] = tot
    with working(P.prec):
        return {k: mpc(v) for k, v in out.items()}


def all_even_theta_constants(P: PeriodPoint, target_bits: int | None = None) -> list:
    """The 36 even theta constants in enumerate_even(3) order."""
    vals = all_theta_constants(P, target_bits)
    return [vals[x.index] for x in enumerate_even(P.g)]


def theta_series(xi1, xi2, P: PeriodPoint, R: int | None = None, prec: int | None = None) -> mpc:
    """sum over m in Z^g + xi1 of exp(pi i m^T Z m + 2 pi i m^T xi2), over a cube.

    xi1, xi2 are rational vectors (need not be reduced). The cube radius defaults
    to tail_radius at the working precision, widened by the size of xi1.
    """
    g = P.g
    prec = prec or P.prec
    wp = prec + GUARD
    xi1 = [Fraction(x) for x in xi1]
    xi2 = [Fraction(x) for x in xi2]
    if R is None:
        R = tail_radius(P.Z.imag_part(), wp) + 1
    shift = [math.floor(x + Fraction(1, 2)) for x in xi1]
    with working(wp):
        Z = P.Z.with_prec(wp)
        ipi = mpc(0, gmpy2.const_pi())
        x1 = [mpfr(x.numerator) / x.denominator for x in xi1]
        x2 = [mpfr(x.numerator) / x.denominator for x in xi2]
        w = gmpy2.exp(2 * ipi * Z[0, 0])
        total = mpc(0)
        for rest in product(range(-R, R + 1), repeat=g - 1):
            mr = [rest[i] - shift[i + 1] + x1[i + 1] for i in range(g - 1)]
            m1 = -R - shift[0] + x1[0]
            m = [m1] + mr
            e = mpc(0)
            for i in range(g):
                for j in range(g):
                    e += Z[i, j] * m[i] * m[j]
            e = ipi * e + 2 * ipi * sum(mi * ci for mi, ci in zip(m, x2))
            s = sum(Z[0, j] * m[j] for j in range(1, g))
            q = gmpy2.exp(e)
            r = gmpy2.exp(ipi * (Z[0, 0] * (2 * m1 + 1) + 2 * s) + 2 * ipi * x2[0])
            row = mpc(0)
            for _ in range(2 * R + 1):
                row += q
                q *= r
                r *= w
            total += row
    with working(prec):
        return mpc(total)


def theta_constant(xi: HalfCharacteristic, P: PeriodPoint) -> mpc:
    """theta[xi](0, Z) by direct cube summation (independent of the batched route)."""
    if xi.g != P.g:
        raise ValueError("genus mismatch")
    return theta_series([Fraction(b, 2) for b in xi.top], [Fraction(b, 2) for b in xi.bottom], P)


def integer_shift_check(xi: HalfCharacteristic, n, P: PeriodPoint, tol_bits: int | None = None) -> int:
    """Sign exp(2 pi i xi_1^T n_2) relating theta[xi + n] to theta[xi]; asserts it numerically."""
    g = xi.g
    n = [int(v) for v in n]
    n1, n2 = n[:g], n[g:]
    sign = -1 if sum(t * v for t, v in zip(xi.top, n2)) % 2 else 1
    base = theta_constant(xi, P)
    shifted = theta_series(
        [Fraction(b, 2) + v for b, v in zip(xi.top, n1)],
        [Fraction(b, 2) + v for b, v in zip(xi.bottom, n2)],
        P,
    )
    tol = tol_bits if tol_bits is not None else P.prec - 32
    with working(P.prec):
        diff = abs(shifted - sign * base)
        scale = max(abs(base), mpfr(1))
    if diff != 0 and log2_abs(diff) - log2_abs(scale) > -tol:
        raise AssertionError("integer shift rule violated numerically")
    return sign


def vanishing_pattern(values, prec: int, threshold_bits: int | None = None):
    """Indices of values with |v| < 2^-threshold * max|v| (default threshold prec/2)."""
    thr = threshold_bits if threshold_bits is not None else prec // 2
    top = max(abs(v) for v in values)
    lt = log2_abs(top)
    return [i for i, v in enumerate(values) if v == 0 or log2_abs(v) < lt - thr]
