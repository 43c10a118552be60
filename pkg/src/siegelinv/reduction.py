"""Heuristic reduction of period matrices toward the Siegel fundamental domain.

Each round does LLL on Im Z, integer translation of Re Z, then tries the full
inversion and the three embedded SL2 inversions, keeping one if it raises
det Im Z by more than a factor 1 + 2^-20. All moves are exact elements of
Sp(2g, Z); the accumulated matrix M satisfies Z' = M.Z.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpfr

from .forms import (
    SymplecticMatrix,
    basis_change,
    full_inversion,
    partial_inversion,
    symplectic_action,
    translation,
)
from .numerics.lattice import lll_reduce_real_gram
from .numerics.linalg import ComplexMatrix
from .numerics.mp import log2_abs, working
from .theta import PeriodPoint

MAX_ITER = 200
GAIN = 1 + 2.0**-20


class ReductionWarning(RuntimeWarning):
    pass


@dataclass
class ReductionResult:
    Z_reduced: PeriodPoint
    M: SymplecticMatrix
    lambda_min_before: float
    lambda_min_after: float
    converged: bool = True
    iterations: int = 0


def det_imag(P: PeriodPoint) -> mpfr:
    with working(P.prec):
        Y = ComplexMatrix.from_rows(P.Z.imag_part(), P.prec)
        return Y.det().real


def _lll_step(P: PeriodPoint):
    U = lll_reduce_real_gram(P.Z.imag_part(), bits=min(P.prec, 128))
    if U == [[int(i == j) for j in range(P.g)] for i in range(P.g)]:
        return None
    return basis_change(U)


def _translation_step(P: PeriodPoint):
    with working(P.prec):
        S = [[int(gmpy2.rint(x)) for x in row] for row in P.Z.real_part()]
    if not any(any(r) for r in S):
        return None
    return translation([[-x for x in r] for r in S])


def _inversions(g: int):
    return [full_inversion(g)] + [partial_inversion(k, g) for k in range(g)]


def reduce(P: PeriodPoint, max_iter: int = MAX_ITER) -> ReductionResult:
    """Reduce P; returns Z' = M.Z with the exact M."""
    g = P.g
    M = SymplecticMatrix.identity(g)
    cur = P
    lam0 = P.lambda_min
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        moved = False
        for step in (_lll_step, _translation_step):
            G = step(cur)
            if G is not None:
                cur, _ = symplectic_action(G, cur)
                M = G @ M
                moved = True
        best = None
        for G in _inversions(g):
            try:
                _, cocycle = symplectic_action(G, cur)
            except ArithmeticError:
                continue
            # det Im(G.Z) = det Im Z / |det(CZ + D)|^2
            gain = -2 * log2_abs(cocycle)
            if gain > math.log2(GAIN) and (best is None or gain > best[0]):
                best = (gain, G)
        if best is not None:
            cur, _ = symplectic_action(best[1], cur)
            M = best[1] @ M
            moved = True
        if not moved:
            converged = True
            break
    if not converged:
        warnings.warn("reduction did not converge; returning best so far", ReductionWarning)
    # recompute from the original point so the result is exactly M.Z
    Zr, _ = symplectic_action(M, P)
    return ReductionResult(Zr, M, lam0, Zr.lambda_min, converged, it)


def tracking_error(P: PeriodPoint, res: ReductionResult) -> float:
    """log2 of max |M.Z - Z'| (should sit near -prec)."""
    Zp, _ = symplectic_action(res.M, P)
    with working(P.prec):
        d = (Zp.Z - res.Z_reduced.Z).max_abs()
    return log2_abs(d) if d != 0 else float("-inf")
