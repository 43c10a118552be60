"""Arbitrary precision foundation: rationals, mpc values, small matrices, LLL, quadrature."""

from fractions import Fraction as BigRational

from gmpy2 import mpc as BigComplex

from .factor import factor_rational, factorize, is_prime, recompose
from .lattice import SingularBasisError, integer_relation, lll_reduce
from .linalg import ComplexMatrix, SingularMatrixError, int_det, int_matmul, int_transpose
from .mp import MIN_PREC, bits_of_agreement, decimal_string, log2_abs, parse_mpfr, to_mpc, working
from .quadrature import gauss_chebyshev
from .recognize import NotRealError, recognize_with_relation
