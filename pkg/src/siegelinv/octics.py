"""Exact algebra on binary forms of degree <= 8.

A form of degree d is stored by its coefficient list, the entry at index i
being the coefficient of x^i z^(d-i). Curves y^2 = f(x) use the form
F(x, z) = z^8 f(x/z).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .numerics.linalg import int_det


class SingularCurveError(ValueError):
    pass


@dataclass(frozen=True)
class BinaryForm:
    degree: int
    coeffs: tuple

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("negative degree")
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("need degree+1 coefficients")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def constant(cls, c) -> BinaryForm:
        return cls(0, (c,))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def scalar(self) -> Fraction:
        if self.degree != 0:
            raise ValueError("form is not a constant")
        return self.coeffs[0]

    def __mul__(self, other):
        if not isinstance(other, BinaryForm):
            return BinaryForm(self.degree, tuple(other * c for c in self.coeffs))
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return BinaryForm(self.degree + other.degree, tuple(out))

    __rmul__ = __mul__

    def __add__(self, other: BinaryForm) -> BinaryForm:
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return BinaryForm(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def dx(self) -> BinaryForm:
        if self.degree == 0:
            return BinaryForm(0, (0,))
        return BinaryForm(self.degree - 1, tuple(i * self.coeffs[i] for i in range(1, self.degree + 1)))

    def dz(self) -> BinaryForm:
        if self.degree == 0:
            return BinaryForm(0, (0,))
        d = self.degree
        return BinaryForm(d - 1, tuple((d - i) * self.coeffs[i] for i in range(d)))

    def evaluate(self, x, z=1):
        return sum(c * x**i * z ** (self.degree - i) for i, c in enumerate(self.coeffs))

    def dehomogenize(self) -> list[Fraction]:
        """Coefficients of F(x, 1), constant term first, trailing zeros stripped."""
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        return c

    def transform(self, a, b, c, d) -> BinaryForm:
        """F(a x + b z, c x + d z)."""
        lin_x = BinaryForm(1, (b, a))
        lin_z = BinaryForm(1, (d, c))
        n = self.degree
        out = BinaryForm(n, (0,) * (n + 1))
        for i, coef in enumerate(self.coeffs):
            if coef:
                term = BinaryForm(0, (coef,))
                for _ in range(i):
                    term = term * lin_x
                for _ in range(n - i):
                    term = term * lin_z
                out = out + term
        return out


def _poly(f) -> list[Fraction]:
    c = [Fraction(x) for x in f]
    while c and c[-1] == 0:
        c.pop()
    return c


def homogenize(f, target_degree: int = 8) -> BinaryForm:
    """F(x,z) = z^target f(x/z) from ascending univariate coefficients."""
    if isinstance(f, BinaryForm):
        if f.degree != target_degree:
            raise ValueError("form has the wrong degree")
        return f
    c = _poly(f)
    deg = len(c) - 1
    if deg < 7:
        raise ValueError("genus below 3 not supported")
    if deg > target_degree:
        raise ValueError("degree above target")
    return BinaryForm(target_degree, tuple(c + [Fraction(0)] * (target_degree - deg)))


def _d(form: BinaryForm, nx: int, nz: int) -> BinaryForm:
    for _ in range(nx):
        form = form.dx()
    for _ in range(nz):
        form = form.dz()
    return form


def transvectant(f: BinaryForm, g: BinaryForm, k: int) -> BinaryForm:
    """k-th transvectant with the factorial normalization (m-k)!(n-k)!/(m!n!)."""
    m, n = f.degree, g.degree
    if k < 0 or k > min(m, n):
        raise ValueError(f"transvectant order {k} too large for degrees {m}, {n}")
    out = BinaryForm(m + n - 2 * k, (0,) * (m + n - 2 * k + 1))
    for i in range(k + 1):
        term = _d(f, k - i, i) * _d(g, i, k - i)
        sgn = (-1) ** i * comb(k, i)
        out = out + term * sgn
    return out * Fraction(factorial(m - k) * factorial(n - k), factorial(m) * factorial(n))


def _sylvester(p: list, q: list) -> list[list]:
    """Sylvester matrix of p, q given with leading coefficient first."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(p) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(q) + [0] * (size - n - 1 - i))
    return rows


def resultant(p_asc, q_asc) -> Fraction:
    p = list(reversed(_poly(p_asc)))
    q = list(reversed(_poly(q_asc)))
    return Fraction(int_det(_sylvester(p, q)))


def _univariate_disc(c: list) -> Fraction:
    n = len(c) - 1
    deriv = [i * c[i] for i in range(1, n + 1)]
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(c, deriv) / c[-1]


def discriminant(F: BinaryForm) -> Fraction:
    """Discriminant of a binary form of degree 8.

    If the x^8 coefficient vanishes the form is first moved by z -> z + t x
    (an SL2 substitution, so the value is unchanged) to make it nonzero; the
    univariate discriminant of F(x,1) is then a 15x15 Sylvester determinant
    divided by the leading coefficient.
    """
    if F.degree != 8:
        raise ValueError("discriminant expects a degree 8 form")
    if F.is_zero():
        return Fraction(0)
    G = F
    t = 0
    while G.coeffs[-1] == 0:
        t += 1
        G = F.transform(1, 0, t, 1)
    return _univariate_disc(list(G.coeffs))


def curve_discriminant(f) -> Fraction:
    """Delta = 2^12 * discriminant(homogenize(f, 8))."""
    return 2**12 * discriminant(homogenize(f, 8))


@dataclass(frozen=True)
class ShiodaTuple:
    J2: Fraction
    J3: Fraction
    J4: Fraction
    J5: Fraction
    J6: Fraction
    J7: Fraction
    J8: Fraction
    J9: Fraction
    J10: Fraction

    def as_list(self) -> list[Fraction]:
        return [self.J2, self.J3, self.J4, self.J5, self.J6, self.J7, self.J8, self.J9, self.J10]


def shioda_invariants(f) -> ShiodaTuple:
    F = homogenize(f, 8)
    T = transvectant
    g = T(F, F, 4)
    k = T(F, F, 6)
    h = T(k, k, 2)
    m = T(F, k, 4)
    n = T(F, h, 4)
    p = T(g, k, 4)
    q = T(g, h, 4)
    vals = [
        T(F, F, 8), T(F, g, 8), T(k, k, 4), T(m, k, 4), T(k, h, 4),
        T(m, h, 4), T(p, h, 4), T(n, h, 4), T(q, h, 4),
    ]
    return ShiodaTuple(*(v.scalar() for v in vals))


# (index into J2..J10, power of J, power of Delta)
ABSOLUTE_SHAPE = (
    (0, 7, 1), (1, 14, 3), (2, 7, 2), (3, 14, 5), (4, 7, 3),
    (5, 2, 1), (6, 7, 4), (7, 14, 9), (8, 7, 5),
)
ABSOLUTE_NAMES = tuple(f"J{i + 2}^{a}/D^{b}" for i, a, b in ABSOLUTE_SHAPE)


def absolute_invariants(f) -> list[Fraction]:
    delta = curve_discriminant(f)
    if delta == 0:
        raise SingularCurveError("singular curve")
    J = shioda_invariants(f).as_list()
    return [J[i] ** a / delta**b for i, a, b in ABSOLUTE_SHAPE]


@lru_cache(maxsize=None)
def _cached_absolute(coeffs: tuple) -> tuple:
    return tuple(absolute_invariants(list(coeffs)))
