"""Integer factorization: trial division, then Pollard rho (Brent)."""

from __future__ import annotations

import math
from functools import lru_cache

import gmpy2

TRIAL_BOUND = 10**6

# Deterministic Miller-Rabin witnesses for n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=1)
def small_primes(bound: int = TRIAL_BOUND) -> tuple[int, ...]:
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, bound + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _miller_rabin(n: int, base: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(base, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin below 2**64, strong BPSW above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < 1 << 64:
        return all(_miller_rabin(n, b) for b in _MR_BASES[:12])
    return bool(gmpy2.is_strong_bpsw_prp(n))


def _brent(n: int, c: int) -> int:
    """One Pollard-rho run with Brent's cycle detection; may return n."""
    y, r, q, g = 2, 1, 1, 1
    m = 128
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g


def _split(n: int) -> int:
    for c in range(1, 1000):
        d = _brent(n, c)
        if 1 < d < n:
            return d
    raise ArithmeticError(f"pollard rho failed on {n}")


def factorize(n: int) -> dict[int, int]:
    """Return ``{prime: exponent}`` with ``prod(p**e) == abs(n)``.

    The sign of ``n`` is not part of the result.
    """
    n = abs(int(n))
    if n == 0:
        raise ValueError("zero has no factorization")
    out: dict[int, int] = {}
    for p in small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = gmpy2.iroot(m, 2)
        if r[1]:
            stack.extend((int(r[0]), int(r[0])))
            continue
        d = _split(m)
        stack.extend((d, m // d))
    return dict(sorted(out.items()))


def factor_rational(x) -> tuple[int, dict[int, int], dict[int, int]]:
    """Sign, numerator and denominator factorizations of a nonzero rational."""
    from fractions import Fraction

    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no factorization")
    sign = 1 if x > 0 else -1
    return sign, factorize(x.numerator), factorize(x.denominator)


def recompose(factors: dict[int, int]) -> int:
    out = 1
    for p, e in factors.items():
        out *= p**e
    return out
