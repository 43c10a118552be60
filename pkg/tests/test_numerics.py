import math
import random
from fractions import Fraction

import gmpy2
import numpy as np
import pytest
import sympy
from gmpy2 import mpc, mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from siegelinv.numerics.factor import factor_rational, factorize, is_prime, recompose
from siegelinv.numerics.lattice import integer_relation, lll_reduce
from siegelinv.numerics.linalg import ComplexMatrix, int_det
from siegelinv.numerics.mp import bits_of_agreement, decimal_string, log2_abs, parse_mpfr, working
from siegelinv.numerics.quadrature import gauss_chebyshev, nodes_for_accuracy
from siegelinv.numerics.recognize import NotRealError, real_part_checked, recognize_with_relation


# -- factorization, checked against sympy ------------------------------------


@given(st.integers(min_value=2, max_value=10**18))
@settings(max_examples=200, deadline=None)
def test_factorize_matches_sympy(n):
    assert factorize(n) == sympy.factorint(n)


@given(st.integers(min_value=0, max_value=10**12))
@settings(max_examples=300, deadline=None)
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


def test_factorize_large_semiprime():
    p, q = 1000000007, 998244353
    assert factorize(p * q * 2**5 * 1063**3) == {2: 5, 1063: 3, q: 1, p: 1}


def test_factor_rational_and_recompose():
    s, num, den = factor_rational(Fraction(-2**7 * 11, 3**4 * 41))
    assert s == -1 and recompose(num) == 2**7 * 11 and recompose(den) == 3**4 * 41
    with pytest.raises(ValueError):
        factor_rational(0)


# -- mp helpers ---------------------------------------------------------------


def test_decimal_round_trip():
    with working(300):
        x = gmpy2.const_pi() * mpfr(2) ** -40
    s = decimal_string(x, 300)
    assert parse_mpfr(s, 300) == x


def test_log2_abs_huge_and_zero():
    with working(100):
        x = mpfr(2) ** 100000 * 3
    assert abs(log2_abs(x) - (100000 + math.log2(3))) < 1e-9
    assert log2_abs(mpfr(0)) == -math.inf


def test_bits_of_agreement():
    with working(200):
        a = mpfr(1)
        b = a + mpfr(2) ** -150
    assert 149 < bits_of_agreement(a, b) < 151


# -- quadrature ---------------------------------------------------------------


def test_gauss_chebyshev_exact_on_polynomials():
    # int_{-1}^{1} t^(2k) / sqrt(1 - t^2) dt = pi * C(2k, k) / 4^k
    prec = 200
    nodes, w = gauss_chebyshev(12, prec)
    with working(prec):
        for k in range(12):
            s = sum((t ** (2 * k) for t in nodes), mpfr(0)) * w
            exact = gmpy2.const_pi() * math.comb(2 * k, k) / mpfr(4) ** k
            assert abs(s - exact) < mpfr(2) ** (-prec + 8)


def test_gauss_chebyshev_odd_count_symmetric():
    nodes, _ = gauss_chebyshev(7, 100)
    assert nodes[3] == 0
    with working(100):
        assert all(nodes[i] == -nodes[6 - i] for i in range(7))


def test_nodes_for_accuracy_rejects_segment_singularity():
    with pytest.raises(ValueError):
        nodes_for_accuracy(1.0, 100)
    assert nodes_for_accuracy(2.0, 1000) > nodes_for_accuracy(4.0, 1000)


# -- linear algebra -----------------------------------------------------------


def _random_matrix(n, rng, prec):
    rows = [[complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n)] for _ in range(n)]
    return rows, ComplexMatrix.from_rows(rows, prec)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_det_and_inverse_against_numpy(n):
    rng = random.Random(n)
    rows, M = _random_matrix(n, rng, 120)
    A = np.array(rows)
    d = M.det()
    assert abs(complex(d) - np.linalg.det(A)) < 1e-10 * max(1, abs(np.linalg.det(A)))
    inv = M.inverse()
    with working(120):
        err = (M @ inv - ComplexMatrix.identity(n, 120)).max_abs()
    assert log2_abs(err) < -100


def test_int_det():
    assert int_det([[2, 1], [7, 4]]) == 1
    assert int_det([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3


# -- lattice reduction and relations ------------------------------------------


def test_lll_unimodular_and_short():
    rng = random.Random(3)
    B = [[rng.randint(-10**6, 10**6) for _ in range(4)] for _ in range(4)]
    U = lll_reduce(B)
    assert abs(int_det(U)) == 1
    red = [[sum(U[i][k] * B[k][j] for k in range(4)) for j in range(4)] for i in range(4)]
    first = sum(x * x for x in red[0])
    assert first <= min(sum(x * x for x in r) for r in B)


def test_integer_relation_finds_known_relation():
    prec = 300
    with working(prec):
        a = gmpy2.sqrt(mpfr(2))
        vals = [a, a * a, mpfr(1)]
    rel = integer_relation(vals, prec)
    assert rel is not None
    with working(prec):
        r = sum(c * v for c, v in zip(rel, vals))
    assert abs(r) < mpfr(2) ** -250


# -- rational recognition -----------------------------------------------------


@given(st.integers(-10**20, 10**20), st.integers(1, 2**40))
@settings(max_examples=100, deadline=None)
def test_recognize_recovers_fraction(p, q):
    prec = 400
    with working(prec):
        x = mpfr(p) / q
    assert recognize_with_relation(x, 45, prec) == Fraction(p, q)


@given(st.integers(1, 2**200), st.integers(2**150, 2**200))
@settings(max_examples=60, deadline=None)
def test_recognize_is_sound_at_low_precision(p, q):
    """Too little precision for the height: never a wrong rational."""
    prec = 256
    with working(prec):
        x = mpfr(p) / q
    r = recognize_with_relation(x, 200, prec)
    assert r is None or r == Fraction(p, q)
    # a bound that is too small: a wrong a/N (N < 2**b) lies at relative distance
    # >= 1/(N p) from p/q, so it can only fit the window when p >= 2**(prec - 2b - 16)
    b = 60
    r = recognize_with_relation(x, b, prec)
    if r is not None and r != Fraction(p, q):
        assert p.bit_length() > prec - 2 * b - 16


def test_recognize_rejects_irrational():
    with working(500):
        x = gmpy2.const_pi()
    assert recognize_with_relation(x, 100, 500) is None


def test_real_part_checked():
    with working(200):
        z = mpc(3, mpfr(2) ** -150)
        w = mpc(3, mpfr(2) ** -20)
    assert real_part_checked(z, 200) == 3
    with pytest.raises(NotRealError):
        real_part_checked(w, 200)
    # conversion keeps the requested precision
    assert real_part_checked(mpfr(1), 300).precision == 300
