"""Fixture data for the thirteen test curves and their expected denominators."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .numerics.factor import factorize, recompose
from .octics import curve_discriminant

TAGS = ("CM", "Chabauty", "modular")


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class SignedFactorization:
    sign: int
    factors: tuple  # sorted (prime, exponent) pairs

    @classmethod
    def from_json(cls, d) -> SignedFactorization | None:
        if d is None:
            return None
        return cls(int(d["sign"]), tuple((int(p), int(e)) for p, e in d["factors"]))

    @classmethod
    def of(cls, x) -> SignedFactorization:
        x = Fraction(x)
        if x == 0:
            raise ValueError("zero has no factorization")
        if x.denominator != 1:
            raise ValueError("expected an integer")
        return cls(1 if x > 0 else -1, tuple(sorted(factorize(x.numerator).items())))

    @property
    def value(self) -> int:
        return self.sign * recompose(dict(self.factors))

    def as_dict(self) -> dict:
        return dict(self.factors)

    def odd_part(self) -> dict:
        return {p: e for p, e in self.factors if p >= 3}

    def restrict(self, pmin: int) -> dict:
        return {p: e for p, e in self.factors if p >= pmin}

    def __str__(self):
        body = "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors) or "1"
        return ("-" if self.sign < 0 else "") + body


@dataclass(frozen=True)
class CurveRecord:
    id: int
    label: str
    tag: str
    coefficients: tuple
    delta: SignedFactorization
    delta_listed: SignedFactorization
    bad_odd_primes: frozenset
    expected_j_denominators: tuple  # three SignedFactorization or None (zero marker)
    expected_abs_denominators: tuple  # nine SignedFactorization or None
    original_model: dict | None = field(default=None, compare=False)
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


def _record(d) -> CurveRecord:
    if d["tag"] not in TAGS:
        raise CatalogError(f"unknown tag {d['tag']!r}")
    j = tuple(SignedFactorization.from_json(x) for x in d["table1_j"])
    ab = tuple(SignedFactorization.from_json(x) for x in d["table1_abs"])
    if len(j) != 3 or len(ab) != 9:
        raise CatalogError(f"curve {d['id']}: wrong number of table entries")
    extra = {k: v for k, v in d.items() if k.startswith("delta_") and k != "delta_listed"}
    return CurveRecord(
        id=int(d["id"]),
        label=d["label"],
        tag=d["tag"],
        coefficients=tuple(int(c) for c in d["coefficients"]),
        delta=SignedFactorization.from_json(d["delta"]),
        delta_listed=SignedFactorization.from_json(d["delta_listed"]),
        bad_odd_primes=frozenset(int(p) for p in d["bad_primes"]),
        expected_j_denominators=j,
        expected_abs_denominators=ab,
        original_model=d.get("original_model"),
        extra={k: SignedFactorization.from_json(v) for k, v in extra.items()},
    )


def load(path=None) -> tuple:
    if path is None:
        text = resources.files("siegelinv").joinpath("data/curves.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    recs = tuple(_record(d) for d in data["curves"])
    ids = [r.id for r in recs]
    if len(set(ids)) != len(ids):
        raise CatalogError("duplicate curve ids")
    return tuple(sorted(recs, key=lambda r: r.id))


@lru_cache(maxsize=1)
def _default():
    return load()


def get(curve_id: int) -> CurveRecord:
    for r in _default():
        if r.id == curve_id:
            return r
    raise CatalogError(f"unknown curve id {curve_id}")


def list_curves() -> tuple:
    return _default()


# public name; shadows the builtin only inside this module's namespace
list = list_curves  # noqa: A001


@dataclass
class ValidationLine:
    id: int
    computed: SignedFactorization
    stored: SignedFactorization
    listed: SignedFactorization
    ok: bool
    note: str = ""


def validate(records=None) -> list:
    """Recompute every discriminant and check the stored factorization and bad primes.

    Raises CatalogError on any mismatch; returns one line per curve.
    """
    records = _default() if records is None else records
    out = []
    for r in records:
        d = curve_discriminant(r.coefficients)
        comp = SignedFactorization.of(d)
        if comp != r.delta or comp.value != d:
            raise CatalogError(f"curve {r.id}: stored discriminant {r.delta} but computed {comp}")
        odd = {p for p, _ in comp.factors if p >= 3}
        if not r.bad_odd_primes <= odd:
            raise CatalogError(f"curve {r.id}: bad primes {sorted(r.bad_odd_primes)} do not divide the discriminant")
        note = ""
        if r.delta_listed != comp:
            ratio = Fraction(comp.value, r.delta_listed.value)
            note = f"listed value {r.delta_listed} differs by factor {ratio}"
        for k, v in r.extra.items():
            if v is not None and v != comp:
                note = (note + "; " if note else "") + f"{k} {v} differs by factor {Fraction(comp.value, v.value)}"
        out.append(ValidationLine(r.id, comp, r.delta, r.delta_listed, True, note))
    return out
