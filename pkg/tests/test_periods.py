import cmath

import pytest

from siegelinv import catalog
from siegelinv.characteristics import INF
from siegelinv.numerics.mp import log2_abs, working
from siegelinv.periods import (
    PeriodError,
    RiemannMatrix,
    branch_points,
    check_tree,
    compute_periods,
    configuration,
    eta_generators_exact,
    eta_generators_numeric,
    moebius_model,
    period_integrals,
    sign_character,
    spanning_tree,
    thomae_order,
)
from siegelinv.octics import absolute_invariants

PREC = 256


@pytest.fixture(scope="module")
def data3():
    return compute_periods(list(catalog.get(3).coefficients), PREC)


@pytest.fixture(scope="module")
def data9():
    return compute_periods(list(catalog.get(9).coefficients), PREC)


def test_branch_points_are_roots():
    f = list(catalog.get(9).coefficients)
    pts = branch_points(f, PREC)
    assert len(pts) == 8
    with working(PREC + 40):
        for z in pts:
            if z is None:
                continue
            v = sum(c * z**k for k, c in enumerate(f))
            assert v == 0 or log2_abs(v) < -PREC + 24


def test_degree7_puts_a_point_at_infinity():
    rec = next(r for r in catalog.list_curves() if r.degree == 7)
    conf = configuration(list(rec.coefficients), PREC)
    assert conf.infinite and INF not in conf.points and len(conf.points) == 7


def test_spanning_tree_is_planar_tree():
    conf = configuration(list(catalog.get(11).coefficients), PREC)
    pts = conf.complex_points()
    edges = spanning_tree(pts)
    assert len(edges) == len(pts) - 1
    check_tree(pts, edges)


def test_riemann_relations(data3, data9):
    for d in (data3, data9):
        assert d.riemann.riemann_ok()
        assert d.riemann.imag_min_eig() > 0


def test_quadrature_doubling_converged(data9):
    doubled = period_integrals(data9.conf, data9.basis, nodes_scale=2.0)
    with working(PREC):
        diff = (doubled.riemann.omega1 - data9.riemann.omega1).max_abs()
        big = data9.riemann.omega1.max_abs()
    assert diff == 0 or log2_abs(diff) - log2_abs(big) < -PREC + 8


def test_eta_numeric_matches_exact(data3, data9):
    for d in (data3, data9):
        assert eta_generators_numeric(d) == eta_generators_exact(d)


def test_json_round_trip(data3):
    R = data3.riemann
    S = RiemannMatrix.from_json(R.to_json())
    with working(PREC):
        assert (S.omega1 - R.omega1).max_abs() == 0
        assert (S.omega2 - R.omega2).max_abs() == 0


def test_alternative_tree_gives_equivalent_point():
    f = list(catalog.get(3).coefficients)
    d = compute_periods(f, PREC, tree="alt")
    assert "moebius_centre" in d.extra
    assert d.riemann.riemann_ok()
    with pytest.raises(ValueError):
        compute_periods(f, PREC, tree="other")


def test_moebius_model_preserves_invariants():
    f = list(catalog.get(4).coefficients)
    g = moebius_model(f, 2)
    assert len(g) == 9 and g[-1] != 0
    assert absolute_invariants(g) == absolute_invariants(f)


def test_thomae_order_finds_sign_pattern():
    # a sign pattern coming from the label order 1..8 with V empty: all +1
    from itertools import combinations

    signs = {frozenset(T): 1 for T in combinations(range(1, 9), 4)}
    assert thomae_order(signs) is not None
    V, e = sign_character(signs)
    assert e == 1 and len(V) in (0, 8)


def test_period_error_is_runtime_error():
    assert issubclass(PeriodError, RuntimeError)


def test_unit_circle_sanity():
    # the complex points of a configuration are plain complex numbers
    conf = configuration(list(catalog.get(13).coefficients), 128)
    assert all(isinstance(z, complex) and cmath.isfinite(z) for z in conf.complex_points().values())
