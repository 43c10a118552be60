"""Gauss-Chebyshev quadrature for integrals with 1/sqrt(1-t^2) endpoint weight."""

from __future__ import annotations

import math

import gmpy2
from gmpy2 import mpc, mpfr

from .mp import working

GUARD = 32


def gauss_chebyshev(n: int, prec: int = 53):
    """Nodes cos((2k-1)pi/2n), k=1..n, and the common weight pi/n.

    Exact for p(t)/sqrt(1-t^2) with deg p < 2n. Nodes are generated by a unit
    rotation recurrence at ``prec + GUARD`` bits and rounded to ``prec``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    with working(prec + GUARD):
        pi = gmpy2.const_pi()
        step = gmpy2.exp(mpc(0, pi / n))
        z = gmpy2.exp(mpc(0, pi / (2 * n)))
        half = [mpfr(0)] * ((n + 1) // 2)
        for k in range(len(half)):
            half[k] = z.real
            z *= step
    with working(prec):
        first = [+x for x in half]
        nodes = first + [-x for x in reversed(first[: n // 2])]
        if n % 2:
            nodes[n // 2] = mpfr(0)
        weight = gmpy2.const_pi() / n
    return nodes, weight


def bernstein_rho(t: complex) -> float:
    """Parameter of the Bernstein ellipse for [-1,1] passing through ``t``."""
    s = (t - 1) ** 0.5 * (t + 1) ** 0.5
    return max(abs(t + s), abs(t - s))


def nodes_for_accuracy(rho: float, bits: int) -> int:
    """Node count for error ~ rho**(-2n) below 2**-bits, with a safety margin."""
    if rho <= 1.0:
        raise ValueError("singularity on the integration segment")
    return int(math.ceil(1.1 * bits * math.log(2) / (2 * math.log(rho)))) + 16
