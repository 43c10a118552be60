"""Period matrices of y^2 = f(x), deg f in {7, 8}, by Gauss-Chebyshev integration along a tree.

Homology comes from lifting the edges of a spanning tree on the finite branch
points: the edge [a, b] lifts to a closed cycle going a -> b on one sheet and
back on the other. Two such cycles meet only at a common end point, where the
local intersection number is read off from the direction in which y passes
through zero. An integral symplectic reduction then gives A- and B-cycles.

Labels: branch points are labelled 1..7 and INF = 8. For degree 7 the label
INF is the point at infinity; for degree 8 it is the last root in the sort
order and plays the role of the base point.
"""

from __future__ import annotations

import cmath
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .characteristics import INF, LABELS, BranchSet, EtaMap, HalfCharacteristic, quadruples, sym_diff, u_eta
from .numerics.linalg import ComplexMatrix, int_det
from .numerics.mp import decimal_string, log2_abs, parse_mpfr, working
from .numerics.quadrature import bernstein_rho, gauss_chebyshev, nodes_for_accuracy
from .octics import SingularCurveError, curve_discriminant, homogenize

GUARD = 40


class PeriodError(RuntimeError):
    pass


# -- branch points ------------------------------------------------------------


def _poly_coeffs(f) -> list[Fraction]:
    c = [Fraction(x) for x in f]
    while c and c[-1] == 0:
        c.pop()
    return c


def _polish(coeffs, z0: complex, prec: int):
    """Newton iteration from a double precision root, doubling precision each step."""
    p = 53
    z = None
    while True:
        p = min(2 * p, prec)
        with working(p):
            cs = [mpfr(c.numerator) / c.denominator for c in coeffs]
            z = mpc(z0) if z is None else mpc(z)
            for _ in range(2):
                v = mpc(0)
                dv = mpc(0)
                for c in reversed(cs):
                    dv = dv * z + v
                    v = v * z + c
                if dv == 0:
                    raise SingularCurveError("singular model")
                z = z - v / dv
        if p >= prec:
            return z


def branch_points(f, prec: int) -> list:
    """Roots of f in (re, im) order, at ``prec`` bits; an 8th entry None stands for infinity."""
    c = _poly_coeffs(f)
    deg = len(c) - 1
    if deg not in (7, 8):
        raise ValueError("genus below 3 not supported" if deg < 7 else "degree above 8")
    if curve_discriminant(c) == 0:
        raise SingularCurveError("singular model")
    approx = np.roots([float(x) for x in reversed(c)])
    wp = prec + GUARD
    roots = [_polish(c, complex(z), wp) for z in approx]
    # residual and separation checks
    with working(wp):
        cs = [mpfr(x.numerator) / x.denominator for x in c]
        for z in roots:
            v = mpc(0)
            for co in reversed(cs):
                v = v * z + co
            scale = sum(abs(co) * abs(z) ** i for i, co in enumerate(cs))
            if v != 0 and log2_abs(v) > log2_abs(scale) - prec + 16:
                raise PeriodError("root polishing did not converge")
    for i in range(len(roots)):
        for j in range(i):
            if abs(complex(roots[i]) - complex(roots[j])) < 1e-12 * (1 + abs(complex(roots[i]))):
                raise SingularCurveError("singular model")
    roots.sort(key=lambda z: (round(float(z.real), 9), round(float(z.imag), 9)))
    with working(prec + GUARD):
        roots = [mpc(z) for z in roots]
    if deg == 7:
        roots.append(None)
    return roots


@dataclass
class BranchConfiguration:
    """Model y^2 = lc * prod_{finite i} (x - a_i) with labelled branch points."""

    points: dict  # label -> mpc, label INF absent when it is at infinity
    lc: mpc
    prec: int

    @property
    def finite_labels(self) -> list:
        return sorted(self.points)

    @property
    def infinite(self) -> bool:
        return INF not in self.points

    def complex_points(self) -> dict:
        return {k: complex(float(v.real), float(v.imag)) for k, v in self.points.items()}


def configuration(f, prec: int) -> BranchConfiguration:
    c = _poly_coeffs(f)
    pts = branch_points(c, prec)
    wp = prec + GUARD
    with working(wp):
        lc = mpc(mpfr(c[-1].numerator) / c[-1].denominator)
    labels = {LABELS[i]: z for i, z in enumerate(pts) if z is not None}
    return BranchConfiguration(labels, lc, prec)


def moebius_configuration(conf: BranchConfiguration, t) -> BranchConfiguration:
    """The model in u = 1/(x - t): branch points 1/(a_i - t), infinity -> 0, lc -> lc * prod (t - a_i)."""
    wp = conf.prec + GUARD
    with working(wp):
        t = mpc(t) if not isinstance(t, Fraction) else mpc(mpfr(t.numerator) / t.denominator)
        pts = {}
        lc = mpc(conf.lc)
        for k, a in conf.points.items():
            diff = a - t
            if diff == 0:
                raise ValueError("Moebius centre is a branch point")
            pts[k] = 1 / diff
            lc *= -diff
        if conf.infinite:
            pts[INF] = mpc(0)
    return BranchConfiguration(pts, lc, conf.prec)


def moebius_model(f, t) -> list[Fraction]:
    """Ascending coefficients of u^8 f(t + 1/u) for rational t."""
    c = _poly_coeffs(f)
    t = Fraction(t)
    out = [Fraction(0)] * 9
    for k, ck in enumerate(c):
        # ck (t u + 1)^k u^(8 - k)
        for j in range(k + 1):
            coef = ck * math.comb(k, j) * t**j
            out[j + 8 - k] += coef
    return out


def choose_moebius_centre(f) -> int:
    """Smallest integer t >= 1 (then <= -1) with f(t) != 0."""
    c = _poly_coeffs(f)
    for t in range(1, 50):
        for s in (t, -t):
            if sum(ck * s**k for k, ck in enumerate(c)) != 0:
                return s
    raise ValueError("no integer Moebius centre found")


# -- trees and edges ----------------------------------------------------------


def spanning_tree(points: dict) -> list[tuple]:
    """Euclidean minimum spanning tree (Prim), ties broken by label order."""
    labels = sorted(points)
    pts = {k: complex(v) for k, v in points.items()}
    in_tree = {labels[0]}
    edges = []
    while len(in_tree) < len(labels):
        best = None
        for u in sorted(in_tree):
            for v in labels:
                if v in in_tree:
                    continue
                key = (abs(pts[u] - pts[v]), min(u, v), max(u, v))
                if best is None or key < best[0]:
                    best = (key, u, v)
        _, u, v = best
        edges.append((u, v))
        in_tree.add(v)
    return edges


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return (b - a).real * (c - a).imag - (b - a).imag * (c - a).real

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    return d1 * d2 < 0 and d3 * d4 < 0


def check_tree(points: dict, edges) -> None:
    pts = {k: complex(v) for k, v in points.items()}
    for i, (a, b) in enumerate(edges):
        for c in pts:
            if c in (a, b):
                continue
            m, d = (pts[a] + pts[b]) / 2, (pts[b] - pts[a]) / 2
            if bernstein_rho((pts[c] - m) / d) < 1 + 1e-9:
                raise PeriodError("path passes through a branch point")
        for a2, b2 in edges[i + 1 :]:
            if len({a, b, a2, b2}) == 4 and _segments_cross(pts[a], pts[b], pts[a2], pts[b2]):
                raise PeriodError("tree edges cross")


class _Edge:
    """Straight edge x = m + d t, t in [-1, 1], with a continuous branch of
    Q(t) = sqrt(-lc prod_{c != a, b} (x - c)), so that y = d sqrt(1 - t^2) Q(t)."""

    def __init__(self, conf: BranchConfiguration, la, lb):
        self.la, self.lb = la, lb
        self.conf = conf
        wp = conf.prec + GUARD
        self.wp = wp
        with working(wp):
            a, b = conf.points[la], conf.points[lb]
            self.a, self.b = a, b
            self.m = (a + b) / 2
            self.d = (b - a) / 2
            self.others = [conf.points[k] for k in conf.finite_labels if k not in (la, lb)]
            self.mlc = -conf.lc
        af, bf = complex(a), complex(b)
        self.of = [complex(c) for c in self.others]
        self.rot = []
        for c in self.of:
            s = (af - c) / abs(af - c) + (bf - c) / abs(bf - c)
            if abs(s) < 1e-12:
                raise PeriodError("path passes through a branch point")
            w = s.conjugate() / abs(s)
            self.rot.append((c, w, cmath.sqrt(w.conjugate())))
        self.sqrt_mlc = cmath.sqrt(complex(self.mlc))
        mf, df = complex(self.m), complex(self.d)
        self.rho = min((bernstein_rho((c - mf) / df) for c in self.of), default=math.inf)

    def q_float(self, xf: complex) -> complex:
        out = self.sqrt_mlc
        for c, w, sw in self.rot:
            out *= sw * cmath.sqrt((xf - c) * w)
        return out

    def q(self, x) -> mpc:
        """Q at x on the edge, in the caller's context."""
        v = mpc(self.mlc)
        for c in self.others:
            v *= x - c
        r = gmpy2.sqrt(v)
        ref = self.q_float(complex(x))
        if float(r.real) * ref.real + float(r.imag) * ref.imag < 0:
            r = -r
        return r

    def direction_at(self, label) -> mpc:
        """Direction in which y passes through zero at the end point ``label``."""
        with working(self.wp):
            if label == self.la:
                return self.d * self.q(self.a)
            return -self.d * self.q(self.b)

    def nodes(self, bits: int) -> int:
        if math.isinf(self.rho):
            return 16
        return nodes_for_accuracy(self.rho, bits)

    def periods(self, n: int | None = None) -> list:
        """[int_gamma x^k dx / (2y) for k = 0, 1, 2] over the lifted cycle.

        The lifted cycle runs along the segment on both sheets, so each
        integral is twice the segment integral of x^k dx / (2y).
        """
        n = n or self.nodes(self.wp)
        ts, wgt = gauss_chebyshev(n, self.wp)
        with working(self.wp):
            acc = [mpc(0), mpc(0), mpc(0)]
            for t in ts:
                x = self.m + self.d * t
                inv = 1 / self.q(x)
                acc[0] += inv
                inv *= x
                acc[1] += inv
                acc[2] += inv * x
            return [wgt * s for s in acc]


# -- symplectic reduction -----------------------------------------------------


def _pair(K, u, v) -> int:
    return sum(u[i] * K[i][j] * v[j] for i in range(len(u)) for j in range(len(v)) if u[i] and v[j])


def symplectic_reduction(K):
    """Integer rows (A_1..A_g, B_1..B_g, kernel...) with <A_i, B_j> = delta_ij, all other pairings 0.

    Symplectic Gram-Schmidt over Z: take a pair with the smallest non-zero
    pairing, shrink it by Euclidean steps against the other vectors until it
    pairs to +-1, then project it out of the rest.
    """
    n = len(K)
    rem = [[int(i == j) for j in range(n)] for i in range(n)]
    As, Bs = [], []
    while True:
        best = None
        for i in range(len(rem)):
            for j in range(i + 1, len(rem)):
                p = _pair(K, rem[i], rem[j])
                if p and (best is None or abs(p) < abs(best[0])):
                    best = (p, i, j)
        if best is None:
            break
        _, i, j = best
        e, f = rem[i], rem[j]
        others = [r for k, r in enumerate(rem) if k not in (i, j)]
        while True:
            d = _pair(K, e, f)
            for k, w in enumerate(others):
                we, wf = _pair(K, w, e), _pair(K, w, f)
                if we % d:
                    # <f, e> = -d, so w - q f pairs with e to less than |d|
                    q = round(Fraction(we, -d))
                    others[k] = f
                    f = [x - q * y for x, y in zip(w, f)]
                    break
                if wf % d:
                    q = round(Fraction(wf, d))
                    others[k] = e
                    e = [x - q * y for x, y in zip(w, e)]
                    break
            else:
                break
        d = _pair(K, e, f)
        if abs(d) != 1:
            raise PeriodError("intersection matrix is not unimodular")
        if d == -1:
            e, f = f, e
        rest = []
        for w in others:
            we, wf = _pair(K, w, e), _pair(K, w, f)
            rest.append([x - wf * y + we * z for x, y, z in zip(w, e, f)])
        As.append(e)
        Bs.append(f)
        rem = rest
    return As, Bs, rem


@dataclass
class HomologyBasis:
    edges: list  # label pairs of the tree edges, i.e. the lifted cycles gamma_e
    edge_intersections: list  # K[e][f] = gamma_e . gamma_f
    A: list  # rows: integer combinations of gamma_e
    B: list
    kernel: list

    @property
    def transform(self) -> list:
        return self.A + self.B + self.kernel

    @property
    def intersection(self) -> list:
        """Intersection matrix of the symplectic basis (A, B)."""
        rows = self.A + self.B
        return [[_pair(self.edge_intersections, u, v) for v in rows] for u in rows]

    def rank(self) -> int:
        return len(self.A) + len(self.B)

    def edge_coordinates(self) -> list:
        """For each gamma_e, its (A-coefficients, B-coefficients) in the new basis."""
        T = [[Fraction(x) for x in r] for r in self.transform]
        n = len(T)
        # solve gamma_e = sum_k c_k new_k, i.e. c^T T = e_e^T, c = (T^T)^-1 e
        inv = _frac_inverse(T)
        g = len(self.A)
        out = []
        for e in range(n):
            c = [inv[e][k] for k in range(n)]
            if any(x.denominator != 1 for x in c):
                raise PeriodError("basis transform is not unimodular")
            out.append(([int(x) for x in c[:g]], [int(x) for x in c[g : 2 * g]], [int(x) for x in c[2 * g :]]))
        return out


def _frac_inverse(T):
    n = len(T)
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(T)]
    for k in range(n):
        p = next(i for i in range(k, n) if a[i][k] != 0)
        a[k], a[p] = a[p], a[k]
        piv = a[k][k]
        a[k] = [x / piv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [r[n:] for r in a]


def _edge_objects(conf, edges):
    return [_Edge(conf, a, b) for a, b in edges]


def homology_basis(conf: BranchConfiguration, edges=None, _objs=None) -> HomologyBasis:
    if edges is None:
        edges = spanning_tree(conf.points)
    check_tree(conf.points, edges)
    objs = _objs or _edge_objects(conf, edges)
    n = len(edges)
    K = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            common = set(edges[i]) & set(edges[j])
            if not common:
                continue
            (p,) = common
            De, Df = objs[i].direction_at(p), objs[j].direction_at(p)
            with working(conf.prec + GUARD):
                s = (De.conjugate() * Df).imag
            if s == 0:
                raise PeriodError("tangent edges at a branch point")
            K[i][j] = 1 if s > 0 else -1
            K[j][i] = -K[i][j]
    A, B, ker = symplectic_reduction(K)
    if len(A) != 3:
        raise PeriodError(f"expected rank 6 intersection form, got {2 * len(A)}")
    if abs(int_det(A + B + ker)) != 1:
        raise PeriodError("basis transform is not unimodular")
    return HomologyBasis(list(edges), K, A, B, ker)


# -- Riemann matrices ---------------------------------------------------------


@dataclass
class RiemannMatrix:
    omega1: ComplexMatrix  # B-periods, columns are cycles, rows are x^k dx / (2y)
    omega2: ComplexMatrix  # A-periods
    prec: int

    @property
    def Z(self) -> ComplexMatrix:
        return self.omega2.inverse() @ self.omega1

    def asymmetry(self):
        return self.Z.asymmetry()

    def imag_min_eig(self) -> float:
        y = np.array([[float(v) for v in r] for r in self.Z.imag_part()])
        return float(np.linalg.eigvalsh((y + y.T) / 2)[0])

    def riemann_ok(self, slack_bits: int = 32) -> bool:
        asym = self.asymmetry()
        scale = max(log2_abs(self.Z.max_abs()), 0)
        sym = asym == 0 or log2_abs(asym) < scale - self.prec + slack_bits
        return sym and self.imag_min_eig() > 0

    def to_json(self) -> str:
        def enc(M):
            return [[[decimal_string(z.real, self.prec), decimal_string(z.imag, self.prec)] for z in r] for r in M.tolist()]

        return json.dumps({"prec": self.prec, "omega1": enc(self.omega1), "omega2": enc(self.omega2)}, indent=1)

    @classmethod
    def from_json(cls, text: str) -> RiemannMatrix:
        d = json.loads(text)
        prec = int(d["prec"])

        def dec(rows):
            with working(prec):
                return ComplexMatrix.from_rows(
                    [[mpc(parse_mpfr(re, prec), parse_mpfr(im, prec)) for re, im in r] for r in rows], prec
                )

        return cls(dec(d["omega1"]), dec(d["omega2"]), prec)


@dataclass
class PeriodData:
    conf: BranchConfiguration
    basis: HomologyBasis
    cycle_periods: list  # per tree edge, 3 values
    riemann: RiemannMatrix
    b_sign: int = 1  # -1 if B was negated to make Im Z positive
    extra: dict = field(default_factory=dict)

    @property
    def prec(self) -> int:
        return self.conf.prec

    @property
    def Z(self) -> ComplexMatrix:
        return self.riemann.Z


def _combine(rows, cycle_periods, prec):
    with working(prec):
        cols = []
        for r in rows:
            col = [mpc(0)] * 3
            for c, per in zip(r, cycle_periods):
                if c:
                    for i in range(3):
                        col[i] += c * per[i]
            cols.append(col)
    return ComplexMatrix.from_rows([[cols[j][i] for j in range(len(cols))] for i in range(3)], prec)


def period_integrals(conf: BranchConfiguration, basis: HomologyBasis | None = None, nodes_scale: float = 1.0) -> PeriodData:
    """Cycle periods of the tree, combined into Omega = (Omega1 Omega2) for the symplectic basis."""
    edges = basis.edges if basis is not None else spanning_tree(conf.points)
    objs = _edge_objects(conf, edges)
    if basis is None:
        basis = homology_basis(conf, edges, objs)
    wp = conf.prec + GUARD
    per = []
    for e in objs:
        n = int(e.nodes(wp) * nodes_scale)
        per.append(e.periods(n))
    # kernel cycles must have vanishing periods
    for r in basis.kernel:
        col = _combine([r], per, wp)
        big = max(abs(v) for p in per for v in p)
        for i in range(3):
            v = col[i, 0]
            if v != 0 and log2_abs(v) > log2_abs(big) - conf.prec / 2:
                raise PeriodError("null-homologous cycle has non-zero period")
    om2 = _combine(basis.A, per, wp)
    om1 = _combine(basis.B, per, wp)
    R = RiemannMatrix(om1, om2, wp)
    sign = 1
    if R.imag_min_eig() < 0:
        y = -np.array([[float(v) for v in r] for r in R.Z.imag_part()])
        if np.linalg.eigvalsh((y + y.T) / 2)[0] <= 0:
            raise PeriodError("Im Z is indefinite: intersection bookkeeping failed")
        sign = -1
        basis = HomologyBasis(basis.edges, basis.edge_intersections, basis.A,
                              [[-x for x in r] for r in basis.B], basis.kernel)
        # negating B keeps A.B = 1 for the opposite orientation
        om1 = _combine(basis.B, per, wp)
        R = RiemannMatrix(om1, om2, wp)
    R = RiemannMatrix(R.omega1.with_prec(conf.prec), R.omega2.with_prec(conf.prec), conf.prec)
    return PeriodData(conf, basis, per, R, sign)


def compute_periods(f, prec: int, tree: str = "mst") -> PeriodData:
    """Period data for y^2 = f(x). ``tree='alt'`` uses the spanning tree of the
    model moved by u = 1/(x - t) for a complex t, pulled back to circular arcs."""
    conf = configuration(f, prec)
    if tree == "mst":
        return period_integrals(conf)
    if tree == "alt":
        t = alternative_centre(conf)
        data = period_integrals(moebius_configuration(conf, t))
        data.extra["moebius_centre"] = t
        return data
    raise ValueError("tree must be 'mst' or 'alt'")


def alternative_centre(conf: BranchConfiguration) -> complex:
    """A Gaussian rational point well away from all branch points."""
    pts = list(conf.complex_points().values())
    scale = max(1.0, max(abs(p) for p in pts))
    best = None
    for k in range(1, 9):
        for cand in (complex(0.5, 0.5) * k, complex(-0.5, 0.75) * k, complex(0.75, -0.5) * k):
            c = cand * scale / 4
            c = complex(round(c.real * 8) / 8, round(c.imag * 8) / 8)
            dist = min(abs(c - p) for p in pts)
            if best is None or dist > best[0] * 1.5:
                best = (dist, c)
    return best[1]


# -- Abel-Jacobi images of branch points and the eta map -----------------------


def _tree_path(edges, start, goal) -> list[int]:
    adj = {}
    for idx, (a, b) in enumerate(edges):
        adj.setdefault(a, []).append((b, idx))
        adj.setdefault(b, []).append((a, idx))
    prev = {start: None}
    dq = deque([start])
    while dq:
        u = dq.popleft()
        for v, idx in adj.get(u, []):
            if v not in prev:
                prev[v] = (u, idx)
                dq.append(v)
    path = []
    v = goal
    while prev[v] is not None:
        u, idx = prev[v]
        path.append(idx)
        v = u
    return path


def _base_label(data: PeriodData):
    return INF if INF in data.conf.points else data.conf.finite_labels[0]


def abel_jacobi_edges(data: PeriodData, i: int) -> list[int]:
    """Multiset (as counts mod 2) of tree edges whose half-periods sum to AJ(P_i - P_INF).

    With INF finite this is the tree path. For INF at infinity, div(y) gives
    sum_j (P_j - P_INF) = 0, whence AJ(P_r - P_INF) = sum_j AJ(P_j - P_r) up
    to the 2-torsion ambiguity that is irrelevant here.
    """
    edges = data.basis.edges
    counts = [0] * len(edges)
    if i == INF:
        return counts
    if INF in data.conf.points:
        for idx in _tree_path(edges, INF, i):
            counts[idx] += 1
        return counts
    r = data.conf.finite_labels[0]
    for idx in _tree_path(edges, r, i):
        counts[idx] += 1
    for j in data.conf.finite_labels:
        for idx in _tree_path(edges, r, j):
            counts[idx] += 1
    return counts


def abel_jacobi_branch(data: PeriodData, i: int) -> list:
    """AJ(P_i - P_INF) as a vector in C^3 (modulo periods), w.r.t. x^k dx / (2y)."""
    counts = abel_jacobi_edges(data, i)
    wp = data.riemann.prec
    with working(wp):
        v = [mpc(0)] * 3
        for c, per in zip(counts, data.cycle_periods):
            if c % 2:
                for k in range(3):
                    v[k] += per[k] / 2
    return v


def lattice_coordinates(data: PeriodData, v) -> tuple:
    """Real (x1, x2) with Omega2^-1 v = x2 + Z x1."""
    prec = data.riemann.prec
    with working(prec):
        w = data.riemann.omega2.inverse() @ ComplexMatrix.from_rows([[x] for x in v], prec)
        Z = data.Z
        Y = [[mpfr(z) for z in r] for r in Z.imag_part()]
        X = [[mpfr(z) for z in r] for r in Z.real_part()]
        imw = [w[i, 0].imag for i in range(3)]
        Ym = ComplexMatrix.from_rows(Y, prec)
        x1 = Ym.solve(ComplexMatrix.from_rows([[t] for t in imw], prec))
        x1 = [x1[i, 0].real for i in range(3)]
        x2 = [w[i, 0].real - sum(X[i][k] * x1[k] for k in range(3)) for i in range(3)]
    return x1, x2


def _round_half(xs, prec):
    bits, worst = [], -math.inf
    for x in xs:
        with working(prec):
            d = gmpy2.rint(2 * x)
            res = abs(2 * x - d)
        if res != 0:
            worst = max(worst, log2_abs(res))
        bits.append(int(d) % 2)
    return tuple(bits), worst


def eta_generators_numeric(data: PeriodData) -> dict:
    """eta({i, INF}) by rounding the normalized Abel-Jacobi coordinates to halves."""
    out = {}
    prec = data.prec
    for i in range(1, 8):
        x1, x2 = lattice_coordinates(data, abel_jacobi_branch(data, i))
        top, r1 = _round_half(x1, data.riemann.prec)
        bot, r2 = _round_half(x2, data.riemann.prec)
        if max(r1, r2) > -prec / 4:
            raise PeriodError("eta recognition failed - raise precision")
        out[i] = HalfCharacteristic(3, top, bot)
    return out


def eta_generators_exact(data: PeriodData) -> dict:
    """The same images from the integer coordinates of the lifted cycles."""
    coords = data.basis.edge_coordinates()
    out = {}
    for i in range(1, 8):
        counts = abel_jacobi_edges(data, i)
        top = [0, 0, 0]
        bot = [0, 0, 0]
        for c, (ca, cb, _) in zip(counts, coords):
            if c % 2:
                for k in range(3):
                    bot[k] += ca[k]
                    top[k] += cb[k]
        out[i] = HalfCharacteristic(3, tuple(t % 2 for t in top), tuple(b % 2 for b in bot))
    return out


def eta_map(data: PeriodData) -> EtaMap:
    num = eta_generators_numeric(data)
    ex = eta_generators_exact(data)
    if num != ex:
        raise PeriodError("numeric and combinatorial eta disagree")
    return EtaMap(num)


# -- identities ---------------------------------------------------------------


def thomae_products(conf: BranchConfiguration, T, order=None) -> mpc:
    """prod_{i<j in T} (a_i - a_j) * prod_{i<j not in T} (a_i - a_j).

    ``order`` lists the labels in the order that defines i < j (default: by label).
    """
    if conf.infinite:
        raise ValueError("Thomae comparison needs eight finite branch points")
    lab = list(order) if order is not None else sorted(conf.points)
    Ts = [k for k in lab if k in T]
    Tc = [k for k in lab if k not in T]
    with working(conf.prec + GUARD):
        out = mpc(1)
        for grp in (Ts, Tc):
            for x in range(len(grp)):
                for y in range(x + 1, len(grp)):
                    out *= conf.points[grp[x]] - conf.points[grp[y]]
    return out


@lru_cache(maxsize=1)
def _order_tables():
    """Permutations of the labels, their pair inversions, and same-side pairs per quadruple."""
    perms = np.array(list(permutations(LABELS)), dtype=np.int8)
    pairs = list(combinations(LABELS, 2))
    rank = np.argsort(perms, axis=1)  # rank[p, label-1] = position of label in order p
    inv = np.stack([rank[:, a - 1] > rank[:, b - 1] for a, b in pairs], axis=1).astype(np.int64)
    same = np.array([[int((a in T) == (b in T)) for a, b in pairs] for T in quadruples()], dtype=np.int64)
    return perms, inv, same


def thomae_order(signs: dict):
    """First ordering of the labels (lexicographic) making every signed ratio +1, or None.

    Reordering the roots flips the sign of prod(T) by the parity of the
    inverted pairs lying on the same side of T.
    """
    perms, inv, same = _order_tables()
    qs = quadruples()
    s = np.array([0 if signs[T] > 0 else 1 for T in qs], dtype=np.int64)
    flips = (inv @ same.T) % 2
    ok = np.nonzero(np.all(flips == s[None, :], axis=1))[0]
    if len(ok) == 0:
        return None
    return tuple(int(x) for x in perms[ok[0]])


def sign_character(signs: dict):
    """V with sign(T) = e * (-1)^{#(T n V)} for all T, as (V, e); None if no such V exists."""
    for r in range(0, 5):
        for V in combinations(LABELS, r):
            V = frozenset(V)
            vals = {signs[T] * (-1) ** len(T & V) for T in signs}
            if len(vals) == 1:
                return V, vals.pop()
    return None


@dataclass
class ThomaeReport:
    max_rel_error: float  # log2, literal formula in the chosen order
    order: tuple | None
    sign_character: tuple | None
    skipped: int
    signs: dict = field(repr=False, default_factory=dict)

    @property
    def max_rel_error_log2(self) -> float:
        return self.max_rel_error


def thomae_check(data: PeriodData, theta_by_char: dict, eta: EtaMap, drop_det: bool = False) -> ThomaeReport:
    """Compare theta[eta_{T o U}]^4 with pi^-6 det(Omega2)^2 lc^3 prod(T) over the 70 quadruples.

    The product depends on how the roots are ordered. The ratios are first
    taken in label order; their signs fix the ordering (see ``thomae_order``)
    and the relative error is then measured for the literal formula in that
    ordering. ``drop_det`` removes det(Omega2)^2 from the constant (negative
    control).
    """
    conf = data.conf
    U = u_eta(eta)
    prec = data.prec
    with working(prec + GUARD):
        c = conf.lc**3 / gmpy2.const_pi() ** 6
        if not drop_det:
            c *= data.riemann.omega2.det() ** 2
    lhs, rhs, signs = {}, {}, {}
    skipped = 0
    for T in quadruples():
        th = theta_by_char[eta(BranchSet(sym_diff(T, U)))]
        with working(prec + GUARD):
            r = c * thomae_products(conf, T)
            if r == 0:
                skipped += 1
                continue
            lhs[T], rhs[T] = th**4, r
            signs[T] = 1 if (th**4 / r).real >= 0 else -1
    order = thomae_order(signs) if not skipped else None
    worst = -math.inf
    for T in lhs:
        with working(prec + GUARD):
            r = c * thomae_products(conf, T, order) if order is not None else rhs[T]
            dev = abs(lhs[T] - r) / abs(r)
        worst = max(worst, log2_abs(dev) if dev != 0 else -math.inf)
    return ThomaeReport(worst, order, sign_character(signs) if signs else None, skipped, signs)


def lockhart_residual(f, omega2: ComplexMatrix, sigma, prec: int) -> float:
    """log2 of |D^15 - 2^180 pi^420 det(Omega2)^-140 Sigma140| / |D^15|."""
    delta = curve_discriminant(f)
    with working(prec + GUARD):
        lhs = mpfr(delta.numerator) ** 15 / mpfr(delta.denominator) ** 15
        rhs = gmpy2.mul_2exp(gmpy2.const_pi() ** 420 / omega2.det() ** 140 * sigma, 180)
        d = abs(lhs - rhs)
    if d == 0:
        return -math.inf
    return log2_abs(d) - log2_abs(lhs)
