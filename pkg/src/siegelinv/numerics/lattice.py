"""Exact LLL reduction and integer relations."""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .linalg import int_det
from .mp import working

DELTA = Fraction(99, 100)


class SingularBasisError(ValueError):
    pass


def _gram_schmidt(G):
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = G[i][j] - sum(mu[j][k] * mu[i][k] * B[k] for k in range(j))
            mu[i][j] = s / B[j]
        B[i] = G[i][i] - sum(mu[i][k] ** 2 * B[k] for k in range(i))
        if B[i] <= 0:
            raise SingularBasisError("singular basis")
    return mu, B


def _row_sub(G, U, k, j, q):
    """b_k <- b_k - q b_j, applied to the Gram matrix and the transform."""
    n = len(G)
    for c in range(n):
        G[k][c] -= q * G[j][c]
    for r in range(n):
        G[r][k] -= q * G[r][j]
    for c in range(len(U[k])):
        U[k][c] -= q * U[j][c]


def _swap(G, U, k):
    G[k], G[k - 1] = G[k - 1], G[k]
    for row in G:
        row[k], row[k - 1] = row[k - 1], row[k]
    U[k], U[k - 1] = U[k - 1], U[k]


def lll_gram(gram, delta: Fraction = DELTA) -> list[list[int]]:
    """LLL-reduce the lattice with Gram matrix ``gram``.

    Returns the unimodular U (as rows) such that U * gram * U^T is the Gram
    matrix of an LLL-reduced basis with parameter ``delta``.
    """
    G = [[Fraction(x) for x in row] for row in gram]
    n = len(G)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    mu, B = _gram_schmidt(G)
    k = 1
    while k < n:
        for j in reversed(range(k)):
            q = round(mu[k][j])
            if q:
                _row_sub(G, U, k, j, q)
                mu, B = _gram_schmidt(G)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            _swap(G, U, k)
            mu, B = _gram_schmidt(G)
            k = max(k - 1, 1)
    return U


def lll_reduce(matrix, *, gram: bool = False, delta: Fraction = DELTA) -> list[list[int]]:
    """Unimodular U with U*B LLL-reduced (rows of B are basis vectors).

    With ``gram=True`` the input is taken to be a Gram matrix instead.
    """
    if gram:
        G = matrix
    else:
        rows = [[Fraction(x) for x in r] for r in matrix]
        G = [[sum(a * b for a, b in zip(r, s)) for s in rows] for r in rows]
    U = lll_gram(G, delta)
    assert abs(int_det(U)) == 1
    return U


def lll_reduce_real_gram(y, bits: int = 64) -> list[list[int]]:
    """LLL on a real positive definite Gram matrix (mpfr entries), via scaling by 2**bits."""
    n = len(y)
    scale = max(abs(y[i][j]) for i in range(n) for j in range(n))
    e, _ = gmpy2.frexp(mpfr(scale))
    shift = bits - int(e)
    with working(max(bits + 64, 128)):
        G = [[int(gmpy2.rint(gmpy2.mul_2exp(mpfr(y[i][j]), shift))) for j in range(n)] for i in range(n)]
    return lll_gram(G)


def integer_relation(values, prec: int, max_coeff_bits: int | None = None):
    """Small integer vector c with sum c_i * values_i ~ 0, via LLL.

    ``values`` are mpfr/mpc reals known to about ``prec`` bits. Returns None if
    the shortest vector found has coefficients beyond ``max_coeff_bits``.
    """
    n = len(values)
    top = max(abs(v) for v in values)
    e, _ = gmpy2.frexp(mpfr(top))
    shift = prec - int(e) - 8
    with working(prec + 64):
        last = [int(gmpy2.rint(gmpy2.mul_2exp(mpfr(v.real if hasattr(v, "imag") else v), shift))) for v in values]
    basis = [[int(i == j) for j in range(n)] + [last[i]] for i in range(n)]
    U = lll_reduce(basis)
    reduced = [[sum(U[i][k] * basis[k][j] for k in range(n)) for j in range(n + 1)] for i in range(n)]
    best = min(reduced, key=lambda r: sum(x * x for x in r))
    coeffs = best[:n]
    if all(c == 0 for c in coeffs):
        return None
    if max_coeff_bits is not None and max(abs(c) for c in coeffs).bit_length() > max_coeff_bits:
        return None
    return coeffs
