"""Global minimal models over Q via Kraus's conditions on (c4, c6).

For each prime p with p^12 | Delta we look for the largest k such that
(c4 / p^4k, c6 / p^6k) are still the invariants of an integral model. Away
from 2 and 3 that is plain divisibility; at 2 and 3 it is Kraus's
congruence criterion. The minimal model is then rebuilt directly from the
scaled (c4, c6) in the reduced normal form a1, a3 in {0, 1}, a2 in {-1, 0, 1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import DEFAULT_POLICY, FactorPolicy, factor_complete, vp
from .weierstrass import Isomorphism, WeierstrassModel, transform


@dataclass(frozen=True)
class MinimalModelResult:
    minimal: WeierstrassModel
    to_minimal: Isomorphism
    delta_min: int
    delta_min_abs: int


def kraus_ok(c4: int, c6: int, p: int) -> bool:
    """Local Kraus condition at p for (c4, c6) to come from an integral model.

    Integrality of c4, c6 and of (c4^3 - c6^2)/1728 is assumed.
    """
    if p == 2:
        return c6 % 4 == 3 or (c4 % 16 == 0 and c6 % 32 in (0, 8))
    if p == 3:
        return c6 == 0 or vp(3, c6) != 2
    return True


def _admissible(c4: int, c6: int) -> bool:
    if (c4**3 - c6**2) % 1728:
        return False
    return kraus_ok(c4, c6, 2) and kraus_ok(c4, c6, 3)


def model_from_c4c6(c4: int, c6: int) -> WeierstrassModel:
    """The reduced integral model with the given c4, c6 (Kraus must hold)."""
    if not _admissible(c4, c6):
        raise ValueError(f"(c4, c6) = ({c4}, {c6}) are not invariants of an integral model")
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    b4, r4 = divmod(b2 * b2 - c4, 24)
    b6, r6 = divmod(-(b2**3) + 36 * b2 * b4 - c6, 216)
    if r4 or r6:
        raise ArithmeticError(f"reconstruction failed for (c4, c6) = ({c4}, {c6})")
    a1 = b2 % 2
    a3 = b6 % 2
    return WeierstrassModel(a1, (b2 - a1) // 4, a3, (b4 - a1 * a3) // 2, (b6 - a3) // 4)


def isomorphism_between(
    m: WeierstrassModel, target: WeierstrassModel, u: Fraction
) -> Isomorphism:
    """The (u, r, s, t) taking m to target, for target's c4, c6 = m's / (u^4, u^6)."""
    a1, a2, a3 = m.a1, m.a2, m.a3
    s = (u * target.a1 - a1) / 2
    r = (u * u * target.a2 - a2 + s * a1 + s * s) / 3
    t = (u**3 * target.a3 - a3 - r * a1) / 2
    iso = Isomorphism(u, r, s, t)
    if transform(m.ainvs, iso) != target.ainvs:
        raise ArithmeticError(f"no isomorphism with scale {u} from {m} to {target}")
    return iso


def minimal_scaling(c4: int, c6: int, p: int, vdelta: int) -> int:
    """Largest k with (c4/p^4k, c6/p^6k) still integral-model invariants."""
    k = vdelta // 12
    while k > 0:
        q4, q6 = p ** (4 * k), p ** (6 * k)
        if c4 % q4 == 0 and c6 % q6 == 0 and kraus_ok(c4 // q4, c6 // q6, p):
            return k
        k -= 1
    return 0


def minimal_model(m: WeierstrassModel, policy: FactorPolicy = DEFAULT_POLICY) -> MinimalModelResult:
    """Global minimal model of m, normalized, with the isomorphism to it.

    Raises ``FactorizationError`` if |Delta| cannot be fully factored, since
    minimality at an unknown prime cannot be certified.
    """
    inv = m.invariants()
    c4, c6, delta = int(inv.c4), int(inv.c6), int(inv.delta)
    u = 1
    for p, e in factor_complete(delta, policy).factors:
        if e >= 12:
            u *= p ** minimal_scaling(c4, c6, p, e)
    minimal = model_from_c4c6(c4 // u**4, c6 // u**6)
    iso = isomorphism_between(m, minimal, Fraction(u))
    dmin = delta // u**12
    return MinimalModelResult(minimal, iso, dmin, abs(dmin))


def is_minimal(m: WeierstrassModel, policy: FactorPolicy = DEFAULT_POLICY) -> bool:
    return minimal_model(m, policy).delta_min_abs == abs(m.discriminant)


def is_minimal_at(m: WeierstrassModel, p: int) -> bool:
    inv = m.invariants()
    c4, c6, delta = int(inv.c4), int(inv.c6), int(inv.delta)
    return minimal_scaling(c4, c6, p, vp(p, delta)) == 0


def reduced_model(m: WeierstrassModel) -> tuple[WeierstrassModel, Isomorphism]:
    """Normalize (a1, a2, a3) without rescaling."""
    inv = m.invariants()
    target = model_from_c4c6(int(inv.c4), int(inv.c6))
    return target, isomorphism_between(m, target, Fraction(1))


__all__ = [
    "MinimalModelResult",
    "is_minimal",
    "is_minimal_at",
    "kraus_ok",
    "minimal_model",
    "model_from_c4c6",
    "reduced_model",
]
