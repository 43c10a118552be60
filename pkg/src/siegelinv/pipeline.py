"""End-to-end computations: periods -> reduction -> theta -> forms -> recognition,
and the numerical identity checks built on them."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpc

from .characteristics import enumerate_all, enumerate_even, enumerate_odd
from .forms import (
    WEIGHTS,
    act_on_periods,
    alpha12,
    chi18,
    form_values,
    h4,
    is_sigma_vanishing,
    modular_invariants,
    random_symplectic,
    sigma140,
    sigma_scale,
    symplectic_action,
)
from .numerics.linalg import ComplexMatrix
from .numerics.mp import log2_abs, working
from .periods import (
    PeriodData,
    choose_moebius_centre,
    compute_periods,
    configuration,
    eta_map,
    lockhart_residual,
    moebius_configuration,
    period_integrals,
    thomae_check,
)
from .recognition import InvariantReport, make_report, recognize_invariant
from .reduction import reduce
from .theta import PeriodPoint, all_theta_constants, vanishing_pattern

J_NAMES = ("j1", "j2", "j3")
MIN_PREC = 256


def _check_prec(prec: int):
    if prec < MIN_PREC:
        raise ValueError(f"analytic commands need at least {MIN_PREC} bits")


@dataclass
class AnalyticPoint:
    """Periods, the reduced point and the theta constants there."""

    f: list
    data: PeriodData
    point: PeriodPoint  # reduced
    omega1: ComplexMatrix  # periods in the reduced basis
    omega2: ComplexMatrix
    thetas: dict  # index -> value at the reduced point

    @property
    def prec(self) -> int:
        return self.point.prec

    def even(self) -> list:
        return [self.thetas[x.index] for x in enumerate_even(3)]

    def odd(self) -> list:
        return [self.thetas[x.index] for x in enumerate_odd(3)]


def analytic_point(f, prec: int, tree: str = "mst", do_reduce: bool = True) -> AnalyticPoint:
    data = compute_periods(f, prec, tree=tree)
    P = PeriodPoint.from_matrix(data.Z, prec)
    om1, om2 = data.riemann.omega1, data.riemann.omega2
    if do_reduce:
        res = reduce(P)
        P = res.Z_reduced
        om1, om2 = act_on_periods(res.M, om1, om2)
    return AnalyticPoint(list(f), data, P, om1, om2, all_theta_constants(P))


# -- modular invariants -------------------------------------------------------


@dataclass
class ModularReport:
    prec: int
    convention: str
    values: tuple  # (j1, j2, j3) as mpc
    reports: list  # InvariantReport per j
    lambda_min: float

    def to_dict(self) -> dict:
        return {
            "prec": self.prec,
            "convention": self.convention,
            "lambda_min": self.lambda_min,
            "invariants": [r.to_dict() for r in self.reports],
        }


def max_den_bits(prec: int, value) -> int:
    """Largest denominator size that recognition can still certify at this precision."""
    e = max(log2_abs(value), 0.0) if value != 0 else 0.0
    return max(int((prec - e - 18) // 3), 0)


def modular_invariants_report(f, prec: int, convention: str = "table1", hints=None, point=None) -> ModularReport:
    """j1, j2, j3 at a period matrix of y^2 = f(x), recognized as rationals where possible."""
    _check_prec(prec)
    A = point or analytic_point(f, prec)
    js = modular_invariants(A.even(), convention)
    reports = []
    for k, (name, j) in enumerate(zip(J_NAMES, js)):
        hint = hints[k] if hints else None
        v = _zero_or_none(j, A, k)
        if v is None:
            v = recognize_invariant(j, max_den_bits(A.prec, j), hint)
        note = "" if v is not None else f"unrecognized at {A.prec} bits - raise precision"
        reports.append(make_report(name, v, note))
    return ModularReport(A.prec, convention, js, reports, A.point.lambda_min)


def _zero_or_none(j, A: AnalyticPoint, k: int):
    """Fraction(0) if j vanishes relative to its term scale, else None."""
    return Fraction(0) if j == 0 or log2_abs(j) < j_scales(A)[k] - A.prec / 2 else None


def term_scales(thetas) -> dict:
    """log2 of the sum of |terms| of each form: the natural size when the form itself cancels."""
    prec = min(int(t.precision[0]) for t in thetas)
    with working(prec):
        a = [abs(t) for t in thetas]
        s_h4 = log2_abs(sum((x**8 for x in a), gmpy2.mpfr(0)))
        s_a12 = log2_abs(alpha12([mpc(x) for x in a]))
    logs = sorted(log2_abs(t) for t in thetas)
    # chi18: the product with its smallest factor replaced by the largest
    s_chi = sum(logs[1:]) + logs[-1]
    return {"h4": s_h4, "alpha12": s_a12, "sigma140": sigma_scale(thetas), "chi18": s_chi}


def j_scales(A: AnalyticPoint):
    t = term_scales(A.even())
    s = log2_abs(sigma140(A.even()))
    return (35 * t["h4"] - s, 35 * t["alpha12"] - 3 * s, 5 * t["h4"] + 10 * t["alpha12"] - s)


# -- verifiers ----------------------------------------------------------------


@dataclass
class VerifyResult:
    name: str
    passed: bool
    residual_log2: float | None
    tolerance_log2: float | None
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        r = "n/a" if self.residual_log2 is None else f"2^{self.residual_log2:.1f}"
        t = "" if self.tolerance_log2 is None else f" (tol 2^{self.tolerance_log2:.0f})"
        return f"{self.name}: {'PASS' if self.passed else 'FAIL'} residual {r}{t}"


def verify_lockhart(f, prec: int, point: AnalyticPoint | None = None, tol_log2: float | None = None) -> VerifyResult:
    """Delta^15 against 2^180 pi^420 det(Omega2)^-140 Sigma140(Z), with Z reduced and Omega2 moved along."""
    _check_prec(prec)
    A = point or analytic_point(f, prec)
    res = lockhart_residual(f, A.omega2, sigma140(A.even()), A.prec)
    tol = tol_log2 if tol_log2 is not None else -0.8 * prec
    return VerifyResult("lockhart", res < tol, res, tol)


def thomae_data(f, prec: int) -> PeriodData:
    """Periods on a model with eight finite branch points (Moebius move for degree 7)."""
    conf = configuration(f, prec)
    if conf.infinite:
        conf = moebius_configuration(conf, choose_moebius_centre(f))
    return period_integrals(conf)


def verify_thomae(f, prec: int, tol_log2: float | None = None, drop_det: bool = False) -> VerifyResult:
    _check_prec(prec)
    data = thomae_data(f, prec)
    allv = all_theta_constants(PeriodPoint.from_matrix(data.Z, prec))
    by_char = {x: allv[x.index] for x in enumerate_all(3)}
    eta = eta_map(data)
    rep = thomae_check(data, by_char, eta, drop_det=drop_det)
    tol = tol_log2 if tol_log2 is not None else -0.8 * prec
    ok = rep.order is not None and rep.skipped == 0 and rep.max_rel_error < tol
    return VerifyResult(
        "thomae",
        ok,
        rep.max_rel_error,
        tol,
        {"order": rep.order, "sign_character": rep.sign_character, "skipped": rep.skipped, "eta": eta},
    )


def verify_vanishing(f, prec: int, point: AnalyticPoint | None = None, threshold_bits: int | None = None) -> VerifyResult:
    """All odd and exactly one even theta constant vanish; chi18 = 0 and Sigma140 != 0."""
    _check_prec(prec)
    A = point or analytic_point(f, prec)
    thr = threshold_bits if threshold_bits is not None else prec // 2
    vals = [A.thetas[i] for i in range(64)]
    top = max(log2_abs(v) for v in vals)
    odd = [log2_abs(v) < top - thr for v in A.odd()]
    even_idx = vanishing_pattern(A.even(), A.prec, thr)
    ev = A.even()
    chi = chi18(ev)
    chi_zero = chi == 0 or log2_abs(chi) < term_scales(ev)["chi18"] - thr
    sig_nonzero = not is_sigma_vanishing(ev, threshold_bits=thr)
    ok = all(odd) and len(even_idx) == 1 and chi_zero and sig_nonzero
    return VerifyResult(
        "vanishing",
        ok,
        None,
        -thr,
        {
            "odd_vanishing": sum(odd),
            "even_vanishing": [str(enumerate_even(3)[i]) for i in even_idx],
            "chi18_zero": chi_zero,
            "sigma140_nonzero": sig_nonzero,
        },
    )


def _rel(a, b, scale_log2: float) -> float:
    """log2 |a - b| relative to max(|a|, |b|), or to the term scale when both vanish."""
    d = abs(a - b)
    if d == 0:
        return -math.inf
    big = max(log2_abs(a), log2_abs(b))
    return log2_abs(d) - max(big, scale_log2) if big < scale_log2 - 64 else log2_abs(d) - big


def verify_modularity(f, prec: int, trials: int = 5, seed: int = 0, size: int = 1, point: AnalyticPoint | None = None,
                      form_tol_log2: float | None = None, j_tol_log2: float | None = None) -> VerifyResult:
    """Weight cocycle identities f(M.Z) = det(CZ+D)^k f(Z) and invariance of j1, j2, j3.

    M runs over random products of small generators of Sp(6, Z). A value that
    vanishes at working precision is compared relative to the size of its
    terms instead of its own size.
    """
    _check_prec(prec)
    A = point or analytic_point(f, prec)
    rng = random.Random(seed)
    ev0 = A.even()
    fv0 = form_values(ev0)
    j0 = modular_invariants(ev0)
    jsc = j_scales(A)
    form_worst, j_worst = -math.inf, -math.inf
    per = []
    for _ in range(trials):
        M = random_symplectic(3, rng, steps=4, size=size)
        Q, cocycle = symplectic_action(M, A.point)
        allq = all_theta_constants(Q)
        ev = [allq[x.index] for x in enumerate_even(3)]
        fv = form_values(ev)
        ts = term_scales(ev)
        row = {}
        with working(A.prec):
            for name, k in WEIGHTS.items():
                lhs = getattr(fv, name)
                rhs = cocycle**k * getattr(fv0, name)
                row[name] = _rel(lhs, rhs, ts[name])
            js = modular_invariants(ev)
            for i, (a, b) in enumerate(zip(js, j0)):
                row[J_NAMES[i]] = _rel(a, b, jsc[i])
        form_worst = max([form_worst] + [row[n] for n in WEIGHTS])
        j_worst = max([j_worst] + [row[n] for n in J_NAMES])
        per.append(row)
    ft = form_tol_log2 if form_tol_log2 is not None else -0.9 * prec
    jt = j_tol_log2 if j_tol_log2 is not None else -0.85 * prec
    ok = form_worst < ft and j_worst < jt
    return VerifyResult("modularity", ok, max(form_worst, j_worst), None,
                        {"forms_worst": form_worst, "j_worst": j_worst, "form_tol": ft, "j_tol": jt, "trials": per})


def basis_independence(f, prec: int, tol_log2: float | None = None) -> VerifyResult:
    """j1 from two unrelated spanning trees (the second via a complex Moebius move)."""
    _check_prec(prec)
    a = analytic_point(f, prec, tree="mst")
    b = analytic_point(f, prec, tree="alt")
    ja = modular_invariants(a.even())[0]
    jb = modular_invariants(b.even())[0]
    res = _rel(ja, jb, j_scales(a)[0])
    riemann = a.data.riemann.riemann_ok() and b.data.riemann.riemann_ok()
    tol = tol_log2 if tol_log2 is not None else -0.8 * prec
    return VerifyResult("basis_independence", riemann and res < tol, res, tol,
                        {"riemann_ok": riemann, "lambda_min": a.data.riemann.imag_min_eig(),
                         "asymmetry_log2": log2_abs(a.data.riemann.asymmetry()) if a.data.riemann.asymmetry() != 0 else -math.inf})
