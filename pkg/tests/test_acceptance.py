"""Acceptance criteria A1-A10.

Each test prints one ``A<n> PASS|FAIL ...`` line (collected and repeated in
the terminal summary). A6 and A9 cannot be met as stated for some curves; they
are computed in full, report FAIL and are marked strict xfail, so an
unexpected pass would be flagged too.

Run as a script (``python tests/test_acceptance.py``) to get just the lines.
The recognition tier is ``SIEGELINV_RECOGNITION_BITS`` (default 4000).
"""

import os
import time
from fractions import Fraction
from functools import lru_cache

import pytest

from siegelinv import catalog, pipeline
from siegelinv.characteristics import azygetic_sextuples, enumerate_even, enumerate_odd
from siegelinv.numerics.factor import factorize
from siegelinv.octics import absolute_invariants
from test_characteristics import AZYGETIC_COUNT, brute_force_azygetic

RECOGNITION_BITS = int(os.environ.get("SIEGELINV_RECOGNITION_BITS", "4000"))
PAPER_SCALE = (1, 6)

LINES = []


def report(name, passed, detail=""):
    line = f"{name} {'PASS' if passed else 'FAIL'} {detail}".rstrip()
    LINES.append(line)
    print(line)
    return passed


def coeffs(i):
    return list(catalog.get(i).coefficients)


@lru_cache(maxsize=None)
def point(i, prec):
    return pipeline.analytic_point(coeffs(i), prec)


@lru_cache(maxsize=None)
def recognized(i, prec=RECOGNITION_BITS):
    return pipeline.modular_invariants_report(coeffs(i), prec)


def den(v: Fraction):
    return factorize(v.denominator) if v.denominator > 1 else {}


def fmt(d):
    return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(d.items())) or "1"


# -- A1 -----------------------------------------------------------------------


def test_a1_counts():
    t = time.time()
    ne, no = len(enumerate_even(3)), len(enumerate_odd(3))
    dt = time.time() - t
    ok = ne == 2 ** 2 * (2 ** 3 + 1) and no == 28 and dt < 1
    assert report("A1", ok, f"even={ne} odd={no} ({dt:.2f}s)")


# -- A2 -----------------------------------------------------------------------


def test_a2_azygetic_oracle():
    t = time.time()
    fast = sorted(azygetic_sextuples.__wrapped__(3))
    brute = brute_force_azygetic()
    dt = time.time() - t
    ok = fast == brute and len(brute) == AZYGETIC_COUNT and dt < 60
    assert report("A2", ok, f"{len(fast)} sextuples, brute force {len(brute)} ({dt:.1f}s)")


# -- A3 -----------------------------------------------------------------------


def test_a3_vanishing():
    out, ok = [], True
    for i in (2, 3, 4):
        r = pipeline.verify_vanishing(coeffs(i), 1000, point=point(i, 1000), threshold_bits=500)
        d = r.details
        ok &= r.passed
        out.append(f"({i}) odd {d['odd_vanishing']}/28 even {len(d['even_vanishing'])} chi18=0 {d['chi18_zero']} "
                   f"Sigma140!=0 {d['sigma140_nonzero']}")
    assert report("A3", ok, "; ".join(out))


# -- A4 -----------------------------------------------------------------------


def test_a4_lockhart():
    out, ok = [], True
    for i in (2, 3, 4, 9):
        r1 = pipeline.verify_lockhart(coeffs(i), 1000, point=point(i, 1000), tol_log2=-800)
        r2 = pipeline.verify_lockhart(coeffs(i), 2000, tol_log2=-1800)
        ok &= r1.passed and r2.passed
        out.append(f"({i}) 2^{r1.residual_log2:.0f} / 2^{r2.residual_log2:.0f}")
    assert report("A4", ok, "residual at 1000 / 2000 bits: " + ", ".join(out))


# -- A5 -----------------------------------------------------------------------


def test_a5_thomae():
    out, ok = [], True
    for i in (2, 4):
        r = pipeline.verify_thomae(coeffs(i), 1000, tol_log2=-800)
        ok &= r.passed
        out.append(f"({i}) 2^{r.residual_log2:.0f}")
    assert report("A5", ok, "max relative error " + ", ".join(out))


# -- A6 -----------------------------------------------------------------------


@pytest.mark.xfail(strict=True, reason="curve (4) has j1 = j2 = j3 = 0 and curves (2), (3) give other j2 denominators; see notes")
def test_a6_table_j_denominators():
    expect = {2: ({}, {2: 3, 3: 12}, {}), 3: ({}, {2: 3}, {}), 4: ({}, {2: 3}, {})}
    out, ok = [], True
    for i, exp in expect.items():
        rep = recognized(i)
        got = []
        for r, e in zip(rep.reports, exp):
            if r.value is None:
                got.append("unrecognized")
                ok = False
            elif r.value == 0:
                got.append("0")
                ok = False
            else:
                got.append(fmt(den(r.value)))
                ok &= den(r.value) == e
        out.append(f"({i}) ({', '.join(got)}) expected ({', '.join(fmt(e) for e in exp)})")
    assert report("A6", ok, f"at {RECOGNITION_BITS} bits: " + "; ".join(out))


# -- A7 -----------------------------------------------------------------------


def test_a7_shioda_column():
    t = time.time()
    bad = []
    for rec in catalog.list_curves():
        for k, (v, exp) in enumerate(zip(absolute_invariants(list(rec.coefficients)), rec.expected_abs_denominators)):
            if exp is None:
                if v != 0:
                    bad.append(f"({rec.id}) entry {k + 1} should vanish")
                continue
            got = {p: e for p, e in den(v).items() if p > 7}
            if v == 0 or got != exp.restrict(8):
                bad.append(f"({rec.id}) entry {k + 1}: {fmt(got)} vs {fmt(exp.restrict(8))}")
    # the curve (13) row, spelled out
    row13 = [den(v).get(41, 0) for v in absolute_invariants(coeffs(13))]
    if row13 != [6, 18, 12, 30, 18, 4, 24, 54, 30]:
        bad.append(f"(13) exponents of 41: {row13}")
    dt = time.time() - t
    ok = not bad and dt < 10
    assert report("A7", ok, f"13 curves, primes > 7 ({dt:.1f}s)" + ("; " + "; ".join(bad) if bad else ""))


# -- A8 -----------------------------------------------------------------------


def test_a8_modularity():
    out, ok = [], True
    for i in (3, 4):
        r = pipeline.verify_modularity(coeffs(i), 1000, trials=5, seed=i, point=point(i, 1000),
                                       form_tol_log2=-900, j_tol_log2=-850)
        ok &= r.passed
        out.append(f"({i}) forms 2^{r.details['forms_worst']:.0f} j 2^{r.details['j_worst']:.0f}")
    assert report("A8", ok, "5 trials each: " + ", ".join(out))


# -- A9 -----------------------------------------------------------------------


def _odd(d):
    return {p: e for p, e in d.items() if p > 2}


@pytest.mark.xfail(strict=True, reason="j2 of curves (2), (5), (8) carries 3^10 where the table lists 3^12; see notes")
def test_a9_bad_reduction_correspondence():
    subset_fail, exact_fail, checked = [], [], 0
    for rec in catalog.list_curves():
        if rec.id in PAPER_SCALE:
            continue
        rep = recognized(rec.id)
        for name, r, exp in zip(pipeline.J_NAMES, rep.reports, rec.expected_j_denominators):
            if r.value is None:
                continue
            checked += 1
            d = den(r.value)
            if not set(_odd(d)) <= rec.bad_odd_primes:
                subset_fail.append(f"({rec.id}) {name}")
            if exp is None:
                match = r.value == 0
            else:
                match = _odd(d) == exp.odd_part()
            if not match:
                exact_fail.append(f"({rec.id}) {name} {fmt(_odd(d))} vs {fmt(exp.odd_part()) if exp else 'zero'}")
    ok = checked > 0 and not subset_fail and not exact_fail
    detail = (f"{checked} recognized at {RECOGNITION_BITS} bits; support in bad primes: "
              f"{'all' if not subset_fail else 'fails ' + ', '.join(subset_fail)}; "
              f"odd part equals table: {'all' if not exact_fail else 'fails ' + ', '.join(exact_fail)}")
    assert report("A9", ok, detail)


# -- A10 ----------------------------------------------------------------------


def test_a10_riemann_and_basis_independence():
    t = time.time()
    bad = []
    for rec in catalog.list_curves():
        r = pipeline.basis_independence(list(rec.coefficients), 500, tol_log2=-400)
        if not r.passed:
            bad.append(f"({rec.id}) riemann {r.details['riemann_ok']} j1 2^{r.residual_log2:.0f}")
    dt = time.time() - t
    ok = not bad
    assert report("A10", ok, f"13 curves at 500 bits ({dt:.0f}s)" + ("; " + "; ".join(bad) if bad else ""))


if __name__ == "__main__":
    import sys

    tests = [(int(n.split("_")[1][1:]), fn) for n, fn in list(globals().items()) if n.startswith("test_a")]
    for _, fn in sorted(tests, key=lambda t: t[0]):
        try:
            fn()
        except AssertionError:
            pass
    sys.exit(0)
