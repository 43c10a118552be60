import random
from fractions import Fraction

import pytest
from gmpy2 import mpc

from siegelinv.characteristics import azygetic_sextuples
from siegelinv.forms import (
    ALPHA12_DEN,
    H4_DEN,
    WEIGHTS,
    NotHyperellipticError,
    SymplecticMatrix,
    act_on_periods,
    alpha12,
    basis_change,
    chi18,
    form_values,
    full_inversion,
    h4,
    modular_invariants,
    partial_inversion,
    random_symplectic,
    sigma140,
    sigma140_direct,
    symplectic_action,
    weight_zero_exponents,
    translation,
)
from siegelinv.numerics.linalg import ComplexMatrix
from siegelinv.numerics.mp import log2_abs, working
from siegelinv.theta import all_even_theta_constants
from test_theta import random_point

PREC = 200


def _rel(a, b):
    with working(PREC):
        d = abs(a - b)
    return -float("inf") if d == 0 else log2_abs(d) - max(log2_abs(a), log2_abs(b))


@pytest.fixture(scope="module")
def generic():
    P = random_point(21, PREC)
    return P, all_even_theta_constants(P)


def test_sigma140_two_algorithms(generic):
    _, th = generic
    assert _rel(sigma140(th), sigma140_direct(th)) < -PREC + 24


def test_weight_zero_exponents():
    assert weight_zero_exponents(4) == (35, 1)
    assert weight_zero_exponents(12) == (35, 3)
    assert weight_zero_exponents(18) == (70, 9)
    assert weight_zero_exponents(140) == (1, 1)
    for k in (2, 6, 10, 28, 70, 98):
        a, b = weight_zero_exponents(k)
        assert a * k == 140 * b
        assert Fraction(a, b) == Fraction(140, k)
    with pytest.raises(ValueError):
        weight_zero_exponents(7)


def test_conventions(generic):
    _, th = generic
    with working(PREC):
        assert _rel(h4(th) / H4_DEN, h4(th, convention="normalized")) < -PREC + 4
        assert _rel(alpha12(th) / ALPHA12_DEN, alpha12(th, convention="normalized")) < -PREC + 4
    with pytest.raises(ValueError):
        h4(th, convention="other")
    with pytest.raises(ValueError):
        h4(th[:35])


def test_alpha12_sums_every_sextuple(generic):
    _, th = generic
    with working(PREC):
        t4 = [t**4 for t in th]
        s = mpc(0)
        for sx in azygetic_sextuples(3):
            p = mpc(1)
            for i in sx:
                p *= t4[i]
            s += p
    assert _rel(alpha12(th), s) < -PREC + 8


def test_j_invariants_definition(generic):
    _, th = generic
    j1, j2, j3 = modular_invariants(th)
    with working(PREC):
        s = sigma140(th)
        assert _rel(j1, h4(th) ** 35 / s) < -PREC + 16
        assert _rel(j2, alpha12(th) ** 35 / s**3) < -PREC + 16
        assert _rel(j3, h4(th) ** 5 * alpha12(th) ** 10 / s) < -PREC + 16


def test_not_hyperelliptic_when_two_thetas_vanish(generic):
    _, th = generic
    th = list(th)
    th[0] = mpc(0)
    th[1] = mpc(0)
    with pytest.raises(NotHyperellipticError):
        modular_invariants(th)


def test_symplectic_matrices():
    for M in (full_inversion(), partial_inversion(1), translation([[1, 2, 0], [2, 0, 1], [0, 1, -1]]),
              basis_change([[1, 1, 0], [0, 1, 0], [0, 0, 1]])):
        assert (M @ M.inverse()) == SymplecticMatrix.identity(3)
    with pytest.raises(ValueError):
        translation([[0, 1, 0], [0, 0, 0], [0, 0, 0]])  # S must be symmetric
    with pytest.raises(ValueError):
        basis_change([[2, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_action_is_a_group_action(generic):
    P, _ = generic
    rng = random.Random(3)
    M1, M2 = random_symplectic(3, rng), random_symplectic(3, rng)
    Q1, c1 = symplectic_action(M1, P)
    Q12, c2 = symplectic_action(M2, Q1)
    Q, c = symplectic_action(M2 @ M1, P)
    with working(PREC):
        assert log2_abs((Q.Z - Q12.Z).max_abs()) < -PREC + 24
        # cocycle relation det(C Z + D) multiplies along products
        assert _rel(c, c1 * c2) < -PREC + 24


@pytest.mark.parametrize("seed", range(3))
def test_weight_cocycle_identities(generic, seed):
    P, th = generic
    M = random_symplectic(3, random.Random(seed), steps=4)
    Q, cocycle = symplectic_action(M, P)
    fv0 = form_values(th)
    fv = form_values(all_even_theta_constants(Q))
    with working(PREC):
        for name, k in WEIGHTS.items():
            lhs, rhs = getattr(fv, name), cocycle**k * getattr(fv0, name)
            if name == "chi18":
                # chi18 is modular only up to a sign on the full group
                assert min(_rel(lhs, rhs), _rel(lhs, -rhs)) < -PREC + 64
            else:
                assert _rel(lhs, rhs) < -PREC + 64
    j0 = modular_invariants(th)
    js = modular_invariants(all_even_theta_constants(Q))
    for a, b in zip(js, j0):
        assert _rel(a, b) < -PREC + 64


def test_act_on_periods_matches_action(generic):
    P, _ = generic
    M = random_symplectic(3, random.Random(9), steps=3)
    om2 = ComplexMatrix.identity(3, PREC)
    om1 = P.Z
    a1, a2 = act_on_periods(M, om1, om2)
    Q, c = symplectic_action(M, P)
    with working(PREC):
        Z = a2.inverse() @ a1
        assert log2_abs((Z - Q.Z).max_abs()) < -PREC + 24
        assert _rel(a2.det(), c) < -PREC + 24


def test_chi18_is_product(generic):
    _, th = generic
    with working(PREC):
        p = mpc(1)
        for t in th:
            p *= t
    assert _rel(chi18(th), p) < -PREC + 8
