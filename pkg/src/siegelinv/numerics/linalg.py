"""Small dense complex matrices at explicit precision."""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .mp import MIN_PREC, to_mpc, working


class SingularMatrixError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ComplexMatrix:
    """Row-major matrix of ``mpc`` entries sharing one precision."""

    rows: int
    cols: int
    entries: tuple
    prec: int

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")
        if self.prec < MIN_PREC:
            raise ValueError(f"precision must be at least {MIN_PREC} bits")

    @classmethod
    def from_rows(cls, rows, prec: int) -> ComplexMatrix:
        rows = [list(r) for r in rows]
        n, m = len(rows), len(rows[0])
        if any(len(r) != m for r in rows):
            raise ValueError("ragged rows")
        flat = tuple(to_mpc(x, prec) for r in rows for x in r)
        return cls(n, m, flat, prec)

    @classmethod
    def identity(cls, n: int, prec: int) -> ComplexMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], prec)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def tolist(self) -> list[list]:
        return [list(self.entries[i * self.cols : (i + 1) * self.cols]) for i in range(self.rows)]

    @property
    def T(self) -> ComplexMatrix:
        return ComplexMatrix(
            self.cols,
            self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
            self.prec,
        )

    def _binary(self, other, op) -> ComplexMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        prec = min(self.prec, other.prec)
        with working(prec):
            ent = tuple(op(a, b) for a, b in zip(self.entries, other.entries))
        return ComplexMatrix(self.rows, self.cols, ent, prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def scale(self, c) -> ComplexMatrix:
        with working(self.prec):
            return ComplexMatrix(self.rows, self.cols, tuple(c * a for a in self.entries), self.prec)

    def __matmul__(self, other) -> ComplexMatrix:
        if isinstance(other, IntMatrixLike):
            other = ComplexMatrix.from_rows(other, self.prec)
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        prec = min(self.prec, other.prec)
        a, b = self.tolist(), other.tolist()
        with working(prec):
            out = []
            for i in range(self.rows):
                for j in range(other.cols):
                    s = mpc(0)
                    for k in range(self.cols):
                        s += a[i][k] * b[k][j]
                    out.append(s)
        return ComplexMatrix(self.rows, other.cols, tuple(out), prec)

    def __rmatmul__(self, other) -> ComplexMatrix:
        return ComplexMatrix.from_rows(other, self.prec) @ self

    def _lu(self):
        if self.rows != self.cols:
            raise ValueError("square matrix required")
        n = self.rows
        a = self.tolist()
        perm = list(range(n))
        sign = 1
        with working(self.prec):
            for k in range(n):
                p = max(range(k, n), key=lambda i: abs(a[i][k]))
                if a[p][k] == 0:
                    raise SingularMatrixError("singular matrix")
                if p != k:
                    a[k], a[p] = a[p], a[k]
                    perm[k], perm[p] = perm[p], perm[k]
                    sign = -sign
                for i in range(k + 1, n):
                    f = a[i][k] / a[k][k]
                    a[i][k] = f
                    for j in range(k + 1, n):
                        a[i][j] -= f * a[k][j]
        return a, perm, sign

    def det(self) -> mpc:
        try:
            a, _, sign = self._lu()
        except SingularMatrixError:
            with working(self.prec):
                return mpc(0)
        with working(self.prec):
            d = mpc(sign)
            for i in range(self.rows):
                d *= a[i][i]
        return d

    def inverse(self) -> ComplexMatrix:
        n = self.rows
        a, perm, _ = self._lu()
        with working(self.prec):
            cols = []
            for c in range(n):
                b = [mpc(int(perm[i] == c)) for i in range(n)]
                for i in range(n):
                    for k in range(i):
                        b[i] -= a[i][k] * b[k]
                for i in reversed(range(n)):
                    for k in range(i + 1, n):
                        b[i] -= a[i][k] * b[k]
                    b[i] /= a[i][i]
                cols.append(b)
        return ComplexMatrix(n, n, tuple(cols[j][i] for i in range(n) for j in range(n)), self.prec)

    def solve(self, rhs: ComplexMatrix) -> ComplexMatrix:
        return self.inverse() @ rhs

    def real_part(self) -> list[list[mpfr]]:
        return [[z.real for z in row] for row in self.tolist()]

    def imag_part(self) -> list[list[mpfr]]:
        return [[z.imag for z in row] for row in self.tolist()]

    def max_abs(self) -> mpfr:
        return max(abs(z) for z in self.entries)

    def asymmetry(self) -> mpfr:
        """max |M_ij - M_ji|."""
        with working(self.prec):
            return max(
                (abs(self[i, j] - self[j, i]) for i in range(self.rows) for j in range(i + 1, self.cols)),
                default=mpfr(0),
            )

    def symmetrized(self) -> ComplexMatrix:
        with working(self.prec):
            ent = tuple((self[i, j] + self[j, i]) / 2 for i in range(self.rows) for j in range(self.cols))
        return ComplexMatrix(self.rows, self.cols, ent, self.prec)

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(float(z.real), float(z.imag)) for z in row] for row in self.tolist()])

    def with_prec(self, prec: int) -> ComplexMatrix:
        with working(prec):
            return ComplexMatrix(self.rows, self.cols, tuple(mpc(z) for z in self.entries), prec)


IntMatrixLike = (list, tuple)


def int_matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def int_transpose(a):
    return [list(r) for r in zip(*a)]


def int_det(a) -> int:
    """Exact determinant of an integer or Fraction matrix (Gaussian elimination over Q)."""
    from fractions import Fraction

    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k] != 0), None)
        if p is None:
            return 0
        if p != k:
            m[k], m[p] = m[p], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return det


def cholesky_real(y) -> list[list[mpfr]]:
    """Lower-triangular L with L L^T = y for a real symmetric matrix of mpfr.

    Runs in the caller's gmpy2 context. Raises ValueError when y is not
    positive definite at working precision.
    """
    n = len(y)
    lo = [[mpfr(0)] * n for _ in range(n)]
    for j in range(n):
        s = y[j][j] - sum(lo[j][k] ** 2 for k in range(j))
        if s <= 0:
            raise ValueError("not positive definite")
        lo[j][j] = gmpy2.sqrt(s)
        for i in range(j + 1, n):
            lo[i][j] = (y[i][j] - sum(lo[i][k] * lo[j][k] for k in range(j))) / lo[j][j]
    return lo


def lambda_min_lower_bound(y) -> float:
    """Certified lower bound for the smallest eigenvalue of a real symmetric matrix.

    Double-precision eigenvalues are shifted down by a Weyl perturbation bound
    covering the conversion and the eigensolver error. Falls back to
    Gershgorin discs when the eigensolver is unavailable.
    """
    a = np.array([[float(v) for v in row] for row in y])
    norm = float(np.linalg.norm(a, "fro"))
    try:
        lam = float(np.linalg.eigvalsh((a + a.T) / 2)[0])
    except np.linalg.LinAlgError:
        lam = min(a[i, i] - sum(abs(a[i, j]) for j in range(len(a)) if j != i) for i in range(len(a)))
    return lam - 1e-12 * max(norm, 1.0)
