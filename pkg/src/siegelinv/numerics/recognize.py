"""Recover small-height rationals from high precision approximations."""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from .lattice import integer_relation
from .mp import log2_abs, working


class NotRealError(ValueError):
    pass


def precision_of(x) -> int:
    if isinstance(x, mpc):
        return int(x.precision[0])
    if isinstance(x, type(mpfr(0))):
        return int(x.precision)
    return 53


def _exact(x: mpfr) -> Fraction:
    q = gmpy2.mpq(x)
    return Fraction(int(q.numerator), int(q.denominator))


def convergents(x: Fraction):
    """Yield the continued fraction convergents p/q of ``x``."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    num, den = x.numerator, x.denominator
    while den:
        a, r = divmod(num, den)
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
        yield Fraction(p1, q1)
        num, den = den, r


def real_part_checked(x, prec: int | None = None) -> mpfr:
    """Real part of ``x``, raising unless Im x is below 2**(-prec/2) relative to max(1, |x|)."""
    prec = prec or precision_of(x)
    if not isinstance(x, mpc):
        with working(prec):
            return mpfr(x)
    scale = max(log2_abs(x), 0.0)
    if x.imag != 0 and log2_abs(x.imag) > scale - prec / 2:
        raise NotRealError("not real to precision")
    return x.real


def recognize_with_relation(x, max_denominator_bits: int, prec: int | None = None):
    """Rational p/q with q < 2**b close to ``x``, or None.

    The acceptance window is 2**(e - prec + b + 16) where e = log2|x|, i.e.
    relative to the magnitude of x (a tiny x is not mistaken for 0). Refuses
    (returns None) when the effective precision prec - max(e, 0) is below
    3b + 18, since then two distinct candidates could both fit.
    """
    prec = prec or precision_of(x)
    b = int(max_denominator_bits)
    re = real_part_checked(x, prec)
    if re == 0:
        return Fraction(0)
    e = max(log2_abs(re), 0.0)
    if prec - e < 3 * b + 18:
        return None
    tol_log = log2_abs(re) - prec + b + 16
    exact = _exact(re)
    bound = 1 << b

    def fits(r: Fraction) -> bool:
        if r.denominator >= bound:
            return False
        d = abs(exact - r)
        if d == 0:
            return True
        return float(gmpy2.log2(gmpy2.mpq(d.numerator, d.denominator))) < tol_log

    for r in convergents(exact):
        if r.denominator >= bound:
            break
        if fits(r):
            return r
    # fallback: integer relation on (x, 1)
    with working(prec):
        rel = integer_relation([re, mpfr(1)], prec, max_coeff_bits=int(e) + b + 8)
    if rel is not None and rel[0] != 0:
        r = Fraction(-rel[1], rel[0])
        if fits(r):
            return r
    return None
