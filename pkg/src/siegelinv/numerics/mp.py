"""Thin helpers over gmpy2's MPFR/MPC types.

Every analytic routine takes an explicit bit precision and evaluates inside
``working(prec)``; values keep the precision they were created with.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

MIN_PREC = 64


def working(prec: int):
    """Context manager that sets real and imaginary precision to ``prec`` bits."""
    prec = int(prec)
    if prec < 2:
        raise ValueError("precision must be at least 2 bits")
    return gmpy2.context(precision=prec, real_prec=prec, imag_prec=prec)


def to_mpc(x, prec: int) -> mpc:
    """Convert int, Fraction, float, complex, mpfr or mpc to an mpc at ``prec``."""
    with working(prec):
        if isinstance(x, Fraction):
            return mpc(mpfr(x.numerator) / x.denominator)
        if isinstance(x, complex):
            return mpc(mpfr(x.real), mpfr(x.imag))
        return mpc(x)


def pi(prec: int) -> mpfr:
    with working(prec):
        return gmpy2.const_pi()


def log2_abs(z) -> float:
    """log2 |z| without overflow; -inf for zero."""
    a = abs(z)
    if a == 0:
        return float("-inf")
    e, m = gmpy2.frexp(a)
    return float(e) + float(gmpy2.log2(abs(m)))


def bits_of_agreement(a, b) -> float:
    """-log2(|a-b| / max(|a|,|b|)), capped at the working precision of a."""
    scale = max(abs(a), abs(b))
    if scale == 0:
        return float("inf")
    diff = abs(a - b)
    if diff == 0:
        return float("inf")
    return log2_abs(scale) - log2_abs(diff)


def to_complex(z) -> complex:
    z = mpc(z)
    return complex(float(z.real), float(z.imag))


def decimal_string(x: mpfr, prec: int) -> str:
    """Decimal mantissa string that round-trips at ``prec`` bits."""
    with working(prec):
        x = mpfr(x)
    if x == 0:
        return "0"
    digits = int(prec * 0.30103) + 3
    mant, exp, _ = x.digits(10, digits)
    sign = "-" if mant.startswith("-") else ""
    return f"{sign}0.{mant.lstrip('-')}e{exp}"


def parse_mpfr(s: str, prec: int) -> mpfr:
    with working(prec):
        return mpfr(s)
