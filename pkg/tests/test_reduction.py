import random

import pytest

from siegelinv.forms import modular_invariants, random_symplectic, symplectic_action
from siegelinv.numerics.mp import log2_abs, working
from siegelinv.reduction import det_imag, reduce, tracking_error
from siegelinv.theta import all_even_theta_constants
from test_theta import random_point

PREC = 200


def _rel(a, b):
    with working(PREC):
        d = abs(a - b)
    return -float("inf") if d == 0 else log2_abs(d) - max(log2_abs(a), log2_abs(b))


@pytest.mark.parametrize("seed", range(3))
def test_reduction_of_a_moved_point(seed):
    P = random_point(40 + seed, PREC)
    M = random_symplectic(3, random.Random(seed), steps=6)
    Q, _ = symplectic_action(M, P)
    res = reduce(Q)
    assert res.converged
    # Z' is exactly M.Z for the returned M
    assert tracking_error(Q, res) < -PREC + 16
    # det Im Z does not decrease and the reduced point has |Re Z| <= 1/2
    assert det_imag(res.Z_reduced) >= det_imag(Q) * (1 - 2.0**-40)
    with working(PREC):
        assert all(abs(x) <= 0.5 + 2.0**-40 for r in res.Z_reduced.Z.real_part() for x in r)
    assert res.lambda_min_after >= res.lambda_min_before * (1 - 2.0**-40) or res.lambda_min_after > 0.4


def test_j_invariant_under_reduction():
    P = random_point(50, PREC)
    M = random_symplectic(3, random.Random(7), steps=8)
    Q, _ = symplectic_action(M, P)
    res = reduce(Q)
    j0 = modular_invariants(all_even_theta_constants(P))
    j1 = modular_invariants(all_even_theta_constants(res.Z_reduced))
    for a, b in zip(j0, j1):
        assert _rel(a, b) < -PREC + 64


def test_reduced_point_is_fixed():
    P = random_point(60, PREC)
    res = reduce(P)
    again = reduce(res.Z_reduced)
    assert again.iterations <= 2
    with working(PREC):
        assert log2_abs(det_imag(again.Z_reduced) - det_imag(res.Z_reduced)) < log2_abs(det_imag(res.Z_reduced)) - PREC + 16 \
            or det_imag(again.Z_reduced) == det_imag(res.Z_reduced)
