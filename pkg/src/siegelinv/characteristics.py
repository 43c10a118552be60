"""Half-integer theta characteristics and the group of branch-point subsets.

Characteristics are kept as doubled bit vectors: ``top`` multiplies Z in the
theta series (entries of xi_1 times 2), ``bottom`` is xi_2 times 2. Adding
characteristics modulo 1 is XOR.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

INF = 8  # label of the branch point at infinity
LABELS = tuple(range(1, 8)) + (INF,)


@dataclass(frozen=True, order=True)
class HalfCharacteristic:
    g: int
    top: tuple
    bottom: tuple

    def __post_init__(self):
        if len(self.top) != self.g or len(self.bottom) != self.g:
            raise ValueError("bit vectors must have length g")
        object.__setattr__(self, "top", tuple(int(b) & 1 for b in self.top))
        object.__setattr__(self, "bottom", tuple(int(b) & 1 for b in self.bottom))

    @classmethod
    def zero(cls, g: int = 3) -> HalfCharacteristic:
        return cls(g, (0,) * g, (0,) * g)

    @classmethod
    def from_index(cls, idx: int, g: int = 3) -> HalfCharacteristic:
        t, b = idx >> g, idx & ((1 << g) - 1)
        bits = lambda v: tuple((v >> (g - 1 - i)) & 1 for i in range(g))
        return cls(g, bits(t), bits(b))

    @property
    def index(self) -> int:
        v = 0
        for bit in self.top + self.bottom:
            v = 2 * v + bit
        return v

    def __add__(self, other: HalfCharacteristic) -> HalfCharacteristic:
        if self.g != other.g:
            raise ValueError("characteristics of different genus")
        return HalfCharacteristic(
            self.g,
            tuple(a ^ b for a, b in zip(self.top, other.top)),
            tuple(a ^ b for a, b in zip(self.bottom, other.bottom)),
        )

    def halves(self):
        """(xi_1, xi_2) as tuples of 0 or 1/2 (floats for display only)."""
        return tuple(b / 2 for b in self.top), tuple(b / 2 for b in self.bottom)

    def __str__(self):
        return "[" + "".join(map(str, self.top)) + "|" + "".join(map(str, self.bottom)) + "]"


def parity(xi: HalfCharacteristic) -> int:
    """+1 for even, -1 for odd: (-1)^(top . bottom)."""
    return -1 if sum(a & b for a, b in zip(xi.top, xi.bottom)) & 1 else 1


def char_sum(xis) -> HalfCharacteristic:
    xis = list(xis)
    if not xis:
        raise ValueError("empty sum")
    out = xis[0]
    for x in xis[1:]:
        out = out + x
    return out


@lru_cache(maxsize=None)
def enumerate_all(g: int = 3) -> tuple:
    return tuple(HalfCharacteristic.from_index(i, g) for i in range(1 << (2 * g)))


@lru_cache(maxsize=None)
def enumerate_even(g: int = 3) -> tuple:
    """Even characteristics in lexicographic order of (top, bottom)."""
    return tuple(x for x in enumerate_all(g) if parity(x) == 1)


@lru_cache(maxsize=None)
def enumerate_odd(g: int = 3) -> tuple:
    return tuple(x for x in enumerate_all(g) if parity(x) == -1)


def _parity_bits(v: int, g: int) -> int:
    t, b = v >> g, v & ((1 << g) - 1)
    return bin(t & b).count("1") & 1


@lru_cache(maxsize=None)
def azygetic_sextuples(g: int = 3) -> tuple:
    """All 6-subsets (index tuples into enumerate_even(g)) whose triples all have odd sum.

    Depth-first search in increasing index order; a candidate is dropped as
    soon as it forms an even triple with two already chosen elements.
    """
    ev = [x.index for x in enumerate_even(g)]
    n = len(ev)
    out = []

    def extend(chosen, start):
        if len(chosen) == 6:
            out.append(tuple(chosen))
            return
        for c in range(start, n - (5 - len(chosen))):
            vc = ev[c]
            ok = True
            for a, b in combinations(chosen, 2):
                if not _parity_bits(ev[a] ^ ev[b] ^ vc, g):
                    ok = False
                    break
            if ok:
                chosen.append(c)
                extend(chosen, c + 1)
                chosen.pop()

    extend([], 0)
    return tuple(out)


# -- Sp(2g, F2) action --------------------------------------------------------


def _mat_mul2(a, b):
    return [[sum(a[i][k] & b[k][j] for k in range(len(b))) & 1 for j in range(len(b[0]))] for i in range(len(a))]


def symplectic_form2(g: int):
    J = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        J[i][g + i] = 1
        J[g + i][i] = 1
    return J


def is_symplectic_mod2(M) -> bool:
    g = len(M) // 2
    J = symplectic_form2(g)
    Mt = [list(r) for r in zip(*M)]
    return _mat_mul2(_mat_mul2(Mt, J), M) == J


def random_symplectic_mod2(g: int = 3, rng: random.Random | None = None, steps: int = 30):
    """Random element of Sp(2g, F2) as a product of symplectic transvections."""
    rng = rng or random.Random()
    n = 2 * g
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    J = symplectic_form2(g)
    for _ in range(steps):
        v = [rng.randint(0, 1) for _ in range(n)]
        if not any(v):
            continue
        Jv = [sum(J[i][k] & v[k] for k in range(n)) & 1 for i in range(n)]
        # T(x) = x + <x, v> v, as a matrix: I + v (Jv)^T
        T = [[(int(i == j) + (v[i] & Jv[j])) & 1 for j in range(n)] for i in range(n)]
        M = _mat_mul2(T, M)
    return M


def act_mod2(M, xi: HalfCharacteristic) -> HalfCharacteristic:
    """Affine action of M = (A B; C D) in Sp(2g, F2) on a characteristic.

    top' = D t + C b + diag(C D^T), bottom' = B t + A b + diag(A B^T), mod 2.
    Preserves parity.
    """
    g = xi.g
    A = [r[:g] for r in M[:g]]
    B = [r[g:] for r in M[:g]]
    C = [r[:g] for r in M[g:]]
    D = [r[g:] for r in M[g:]]
    t, b = xi.top, xi.bottom
    dcd = [sum(C[i][k] & D[i][k] for k in range(g)) & 1 for i in range(g)]
    dab = [sum(A[i][k] & B[i][k] for k in range(g)) & 1 for i in range(g)]
    top = [(sum(D[i][k] & t[k] for k in range(g)) + sum(C[i][k] & b[k] for k in range(g)) + dcd[i]) & 1 for i in range(g)]
    bot = [(sum(B[i][k] & t[k] for k in range(g)) + sum(A[i][k] & b[k] for k in range(g)) + dab[i]) & 1 for i in range(g)]
    return HalfCharacteristic(g, tuple(top), tuple(bot))


# -- branch point subsets -----------------------------------------------------


@dataclass(frozen=True)
class BranchSet:
    """Class of an even subset of B = {1..7, INF} modulo S ~ complement(S).

    Stored by the representative that avoids INF. Odd subsets are accepted
    and identified with S toggled at INF (the divisor of S and S + {INF}
    agree in the Jacobian because 2 P_INF is the hyperelliptic class).
    """

    members: frozenset

    def __init__(self, members=()):
        s = set(members)
        if not s <= set(LABELS):
            raise ValueError(f"labels must lie in 1..7 or {INF}")
        rest = s - {INF}
        if len(rest) % 2:
            rest = set(range(1, 8)) - rest
        object.__setattr__(self, "members", frozenset(rest))

    def __repr__(self):
        return "BranchSet({" + ",".join(map(str, sorted(self.members))) + "})"

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __lt__(self, other):
        return (len(self), sorted(self.members)) < (len(other), sorted(other.members))

    @property
    def index(self) -> int:
        return sum(1 << (i - 1) for i in self.members)


def branch_group_op(S: BranchSet, T: BranchSet) -> BranchSet:
    return BranchSet(S.members ^ T.members)


@lru_cache(maxsize=None)
def all_branch_sets() -> tuple:
    out = []
    for r in range(0, 8, 2):
        for c in combinations(range(1, 8), r):
            out.append(BranchSet(c))
    return tuple(out)


def pair_class(i: int) -> BranchSet:
    """The class of {i, INF}."""
    return BranchSet({i, INF})


class EtaMap:
    """Homomorphism from the branch-set group to half characteristics."""

    def __init__(self, generators: dict):
        """``generators`` maps i in 1..7 to the image of the class of {i, INF}."""
        if set(generators) != set(range(1, 8)):
            raise ValueError("eta needs images for all seven pair classes")
        self.generators = dict(generators)
        g = next(iter(generators.values())).g
        if char_sum(generators.values()) != HalfCharacteristic.zero(g):
            raise ValueError("images of the pair classes must sum to zero")
        self.g = g

    def __call__(self, S) -> HalfCharacteristic:
        if not isinstance(S, BranchSet):
            S = BranchSet(S)
        # the class of S (avoiding INF, even size) is the sum of the {i, INF} classes for i in S
        out = HalfCharacteristic.zero(self.g)
        for i in S.members:
            out = out + self.generators[i]
        return out

    def table(self) -> dict:
        return {S: self(S) for S in all_branch_sets()}


def u_eta(eta) -> frozenset:
    """U = {i : eta({i, INF}) odd} together with INF."""
    if isinstance(eta, EtaMap):
        img = {i: eta(pair_class(i)) for i in range(1, 8)}
    else:
        try:
            img = {i: eta[pair_class(i)] for i in range(1, 8)}
        except KeyError as exc:
            raise ValueError("eta is not defined on all of the group") from exc
    return frozenset({i for i in range(1, 8) if parity(img[i]) == -1} | {INF})


def quadruples() -> tuple:
    """The 70 subsets of B of size 4."""
    return tuple(frozenset(c) for c in combinations(LABELS, 4))


def sym_diff(a, b) -> frozenset:
    return frozenset(a) ^ frozenset(b)
