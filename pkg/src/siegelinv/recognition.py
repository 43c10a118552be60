"""Exact recognition of invariants and comparison with primes of bad reduction."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2

from .numerics.factor import factorize
from .numerics.mp import log2_abs, working
from .numerics.recognize import NotRealError, precision_of, real_part_checked, recognize_with_relation


@dataclass
class InvariantReport:
    name: str
    value: Fraction | None
    denominator_factorization: dict = field(default_factory=dict)
    odd_prime_support: frozenset = frozenset()
    verdict: bool | None = None
    note: str = ""

    @property
    def recognized(self) -> bool:
        return self.value is not None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": None if self.value is None else str(self.value),
            "denominator": sorted(self.denominator_factorization.items()),
            "odd_support": sorted(self.odd_prime_support),
            "verdict": self.verdict,
            "note": self.note,
        }


def _near_integer(y, prec: int, slack_bits: int = 16) -> int | None:
    """The integer nearest to real y if within 2^(e - prec + slack) of it."""
    with working(prec):
        n = gmpy2.rint(y)
        d = abs(y - n)
    e = max(log2_abs(y), 0.0)
    if d == 0 or log2_abs(d) < e - prec + slack_bits:
        return int(n)
    return None


def recognize_invariant(x, max_den_bits: int, hint_denominator: int | None = None, prec: int | None = None):
    """Rational value of ``x`` or None.

    With a hint h, x*h is first tested as a near integer; the hint only helps
    recovery, the returned fraction is in lowest terms whatever h was. Without
    one (or if that fails) the continued fraction route is used.
    """
    prec = prec or precision_of(x)
    try:
        re = real_part_checked(x, prec)
    except NotRealError:
        return None
    if hint_denominator:
        h = int(hint_denominator)
        # x*h carries log2(h) more integer bits; keep the same acceptance margin
        if prec - max(log2_abs(re), 0.0) - h.bit_length() > 3 * h.bit_length() + 18:
            with working(prec + h.bit_length()):
                n = _near_integer(re * h, prec)
            if n is not None:
                return Fraction(n, h)
    return recognize_with_relation(re, max_den_bits, prec)


def odd_primes(factors) -> frozenset:
    return frozenset(p for p in factors if p >= 3)


def make_report(name: str, value: Fraction | None, note: str = "") -> InvariantReport:
    if value is None:
        return InvariantReport(name, None, note=note or "unrecognized - raise precision")
    den = factorize(value.denominator) if value.denominator > 1 else {}
    return InvariantReport(name, value, den, odd_primes(den), note=note)


@dataclass
class BadReductionVerdict:
    name: str
    support: frozenset
    bad_primes: frozenset
    passed: bool | None  # support contained in the bad primes
    reverse: bool | None  # every bad prime shows up (informational)


def compare_with_bad_reduction(reports, bad_odd_primes) -> list[BadReductionVerdict]:
    """Per report: odd denominator support inside the bad primes (PASS) or not (FAIL).

    Reports that were not recognized get passed = None. The reverse inclusion
    is reported for information only.
    """
    bad = frozenset(bad_odd_primes)
    out = []
    for r in reports:
        if not r.recognized:
            out.append(BadReductionVerdict(r.name, frozenset(), bad, None, None))
            continue
        ok = r.odd_prime_support <= bad
        r.verdict = ok
        out.append(BadReductionVerdict(r.name, r.odd_prime_support, bad, ok, bad <= r.odd_prime_support))
    return out


def joint_reverse(verdicts) -> bool | None:
    """Whether every bad prime occurs in at least one recognized denominator."""
    seen = [v for v in verdicts if v.passed is not None]
    if not seen:
        return None
    union = frozenset().union(*(v.support for v in seen))
    return seen[0].bad_primes <= union
