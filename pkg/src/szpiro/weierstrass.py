"""Weierstrass models, their standard invariants, and coordinate changes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

from .arith import DEFAULT_POLICY, FactorPolicy, factor_complete

Number = Union[int, Fraction]
AInvariants = tuple  # (a1, a2, a3, a4, a6), ints or Fractions


class SingularCurveError(ValueError):
    """The model has zero discriminant."""


class StandardInvariants(NamedTuple):
    b2: Number
    b4: Number
    b6: Number
    b8: Number
    c4: Number
    c6: Number
    delta: Number
    j: Fraction


def _b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def discriminant(ainvs: Sequence[Number]) -> Number:
    b2, b4, b6, b8 = _b_invariants(*ainvs)
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def invariants_of(ainvs: Sequence[Number]) -> StandardInvariants:
    """b2..b8, c4, c6, signed discriminant and j for any (possibly rational) model."""
    b2, b4, b6, b8 = _b_invariants(*ainvs)
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    delta = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if delta == 0:
        raise SingularCurveError(f"singular model {list(ainvs)}: discriminant is zero")
    return StandardInvariants(b2, b4, b6, b8, c4, c6, delta, Fraction(c4) ** 3 / delta)


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer coefficients."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                if isinstance(v, Fraction) and v.denominator == 1:
                    object.__setattr__(self, name, int(v))
                    continue
                raise TypeError(f"{name} must be an integer, got {v!r}")
        if discriminant(self.ainvs) == 0:
            raise SingularCurveError(f"singular model {list(self.ainvs)}: discriminant is zero")

    @classmethod
    def from_ainvs(cls, ainvs: Sequence[Number]) -> "WeierstrassModel":
        if len(ainvs) != 5:
            raise ValueError(f"expected five a-invariants, got {len(ainvs)}")
        return cls(*ainvs)

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def invariants(self) -> StandardInvariants:
        return invariants_of(self.ainvs)

    @property
    def discriminant(self) -> int:
        return discriminant(self.ainvs)

    @property
    def j(self) -> Fraction:
        return self.invariants().j

    def transform(self, iso: "Isomorphism") -> tuple[Fraction, ...]:
        return transform(self.ainvs, iso)

    def __str__(self) -> str:
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"


def standard_invariants(m: WeierstrassModel | Sequence[Number]) -> StandardInvariants:
    ainvs = m.ainvs if isinstance(m, WeierstrassModel) else tuple(m)
    return invariants_of(ainvs)


@dataclass(frozen=True)
class Isomorphism:
    """The change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""

    u: Fraction = Fraction(1)
    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)
    t: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("u", "r", "s", "t"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.u == 0:
            raise ValueError("isomorphism needs u != 0")

    @classmethod
    def identity(cls) -> "Isomorphism":
        return cls()

    def is_identity(self) -> bool:
        return self == Isomorphism()

    def compose(self, other: "Isomorphism") -> "Isomorphism":
        """self followed by other: transform(transform(m, self), other)."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return Isomorphism(
            u1 * u2,
            r1 + u1 * u1 * r2,
            s1 + u1 * s2,
            t1 + u1**3 * t2 + s1 * u1 * u1 * r2,
        )

    def inverse(self) -> "Isomorphism":
        u, r, s, t = self.u, self.r, self.s, self.t
        return Isomorphism(1 / u, -r / u**2, -s / u, (r * s - t) / u**3)

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.u, self.r, self.s, self.t)


def transform(ainvs: Sequence[Number], iso: Isomorphism) -> tuple[Fraction, ...]:
    a1, a2, a3, a4, a6 = (Fraction(a) for a in ainvs)
    u, r, s, t = iso.as_tuple()
    n1 = a1 + 2 * s
    n2 = a2 - s * a1 + 3 * r - s * s
    n3 = a3 + r * a1 + 2 * t
    n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    n6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
    return (n1 / u, n2 / u**2, n3 / u**3, n4 / u**4, n6 / u**6)


def is_integral(ainvs: Sequence[Number]) -> bool:
    return all(Fraction(a).denominator == 1 for a in ainvs)


def to_model(ainvs: Sequence[Number]) -> WeierstrassModel:
    if not is_integral(ainvs):
        raise ValueError(f"model {list(ainvs)} is not integral")
    return WeierstrassModel(*(int(a) for a in ainvs))


def integralize(
    ainvs: Sequence[Number], policy: FactorPolicy = DEFAULT_POLICY
) -> tuple[WeierstrassModel, Isomorphism]:
    """Smallest scaling u = 1/d making the model integral (a_i -> a_i d^i)."""
    ainvs = tuple(Fraction(a) for a in ainvs)
    if discriminant(ainvs) == 0:
        raise SingularCurveError(f"singular model {list(ainvs)}: discriminant is zero")
    need: dict[int, int] = {}
    for a, weight in zip(ainvs, (1, 2, 3, 4, 6)):
        if a.denominator == 1:
            continue
        for p, e in factor_complete(a.denominator, policy).factors:
            need[p] = max(need.get(p, 0), -(-e // weight))
    d = 1
    for p, k in need.items():
        d *= p**k
    iso = Isomorphism(Fraction(1, d))
    return to_model(transform(ainvs, iso)), iso


def quadratic_twist(m: WeierstrassModel, d: int) -> WeierstrassModel:
    """An integral (not necessarily minimal) model of the twist by d.

    Uses the short model y^2 = x^3 - 27 c4 d^2 x - 54 c6 d^3.
    """
    if d == 0:
        raise ValueError("twist parameter must be nonzero")
    inv = m.invariants()
    return WeierstrassModel(0, 0, 0, -27 * inv.c4 * d * d, -54 * inv.c6 * d**3)
