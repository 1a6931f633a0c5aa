"""Tate's algorithm at a single prime, and the global conductor.

The implementation follows the classical step-by-step procedure (Silverman,
Advanced Topics IV.9.4; Cremona's formulation) and is valid at every prime,
including 2 and 3. All arithmetic is exact; coordinate shifts are chosen as
residues mod p and applied to the integral model.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .arith import DEFAULT_POLICY, FactorPolicy, factor_complete, is_probable_prime, vp
from .minimal import minimal_model
from .weierstrass import Isomorphism, WeierstrassModel, invariants_of, to_model, transform


class Reduction(str, enum.Enum):
    GOOD = "good"
    SPLIT = "multiplicative-split"
    NONSPLIT = "multiplicative-nonsplit"
    ADDITIVE = "additive"

    @property
    def multiplicative(self) -> bool:
        return self in (Reduction.SPLIT, Reduction.NONSPLIT)

    def __str__(self) -> str:
        return self.value


# fixed component counts; I(n) and I*(n) depend on n
_COMPONENTS = {"I0": 1, "II": 1, "III": 2, "IV": 3, "I0*": 5, "IV*": 7, "III*": 8, "II*": 9}
_KODAIRA_RE = re.compile(r"^(?:I(\d+)(\*?)|II\*?|III\*?|IV\*?)$")


@dataclass(frozen=True)
class KodairaType:
    """Kodaira symbol; ``n`` is only meaningful for I(n) and I*(n)."""

    symbol: str
    n: int = 0

    def __post_init__(self):
        if self.symbol in ("I", "I*"):
            if self.n < 1:
                raise ValueError(f"{self.symbol}(n) needs n >= 1")
        elif self.symbol in _COMPONENTS:
            if self.n:
                raise ValueError(f"{self.symbol} takes no index")
        else:
            raise ValueError(f"unknown Kodaira symbol {self.symbol!r}")

    @classmethod
    def parse(cls, text: str) -> "KodairaType":
        text = text.strip().replace("_", "").replace("(", "").replace(")", "")
        m = _KODAIRA_RE.match(text)
        if not m:
            raise ValueError(f"cannot parse Kodaira symbol {text!r}")
        if m.group(1) is None:
            return cls(text)
        n = int(m.group(1))
        star = m.group(2)
        if n == 0:
            return cls("I0*" if star else "I0")
        return cls("I*" if star else "I", n)

    @property
    def components(self) -> int:
        if self.symbol == "I":
            return self.n
        if self.symbol == "I*":
            return self.n + 5
        return _COMPONENTS[self.symbol]

    def __str__(self) -> str:
        if self.symbol == "I":
            return f"I{self.n}"
        if self.symbol == "I*":
            return f"I{self.n}*"
        return self.symbol


@dataclass(frozen=True)
class LocalData:
    p: int
    kodaira: KodairaType
    f_p: int
    vp_delta: int
    m_p: int
    reduction: Reduction


class NotMinimalError(ValueError):
    """Raised when Tate's algorithm finds the model non-minimal at p.

    ``model`` is an isomorphic integral model with p^i | a_i, so dividing
    a_i by p^i gives a model with discriminant smaller by p^12;
    ``iso`` maps the input to ``model``.
    """

    def __init__(self, p: int, model: tuple, iso: Isomorphism):
        super().__init__(f"model is not minimal at {p}")
        self.p = p
        self.model = model
        self.iso = iso


class ConsistencyError(AssertionError):
    """An internal identity (Ogg's formula, conductor caps) failed."""


# ---------------------------------------------------------------------------
# small helpers over F_p

_EXHAUSTIVE_LIMIT = 1000


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    # coefficient lists, lowest degree first; b has invertible leading coeff
    a = a[:]
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        q = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - q * c) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_mod(out, f, p)


def _has_root_mod_p(coeffs: list[int], p: int) -> bool:
    """Whether sum coeffs[i] x^i has a root in F_p (coeffs lowest first)."""
    f = [c % p for c in coeffs]
    while f and f[-1] == 0:
        f.pop()
    if not f:
        return True
    if len(f) == 1:
        return False
    if p < _EXHAUSTIVE_LIMIT:
        for x in range(p):
            acc = 0
            for c in reversed(f):
                acc = (acc * x + c) % p
            if acc == 0:
                return True
        return False
    # roots in F_p <=> gcd(f, x^p - x) nontrivial
    result, base, e = [1], [0, 1], p
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    g = result + [0] * max(0, 2 - len(result))
    g[1] = (g[1] - 1) % p
    while g and g[-1] == 0:
        g.pop()
    a, b = f, g
    while b:
        a, b = b, _poly_mod(a, b, p)
    return len(a) > 1


def _quad_has_root(a: int, b: int, c: int, p: int) -> bool:
    """Root of a x^2 + b x + c mod p."""
    return _has_root_mod_p([c, b, a], p)


def _inv(x: int, p: int) -> int:
    return pow(x % p, -1, p)


def _div(x: int, d: int) -> int:
    q, r = divmod(x, d)
    if r:
        raise ArithmeticError(f"{x} is not divisible by {d}")
    return q


class _Chart:
    """A working integral model plus the accumulated change of variables."""

    def __init__(self, ainvs: tuple[int, ...]):
        self.a = tuple(ainvs)
        self.iso = Isomorphism()

    def shift(self, r: int = 0, s: int = 0, t: int = 0) -> None:
        step = Isomorphism(1, r, s, t)
        self.a = tuple(int(x) for x in transform(self.a, step))
        self.iso = self.iso.compose(step)


def _val(p: int, x: int) -> float:
    return float("inf") if x == 0 else vp(p, x)


def tate_local(m: WeierstrassModel, p: int) -> LocalData:
    """Run Tate's algorithm on an integral model that is minimal at p."""
    if p < 2 or not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    data = _tate(m.ainvs, p)
    check_local(data)
    return data


def _tate(ainvs: tuple[int, ...], p: int) -> LocalData:
    ch = _Chart(ainvs)
    inv = invariants_of(ch.a)
    vd = vp(p, inv.delta)
    if vd == 0:
        return _local(p, KodairaType("I0"), 0, vd, Reduction.GOOD)

    a1, a2, a3, a4, a6 = ch.a
    b2, b4, b6 = inv.b2, inv.b4, inv.b6
    c4, c6 = inv.c4, inv.c6
    # move the singular point of the reduction to (0, 0)
    if p == 2:
        if b2 % 2 == 0:
            r = a4 % 2
            t = (r * (1 + a2 + a4) + a6) % 2
        else:
            r = a3 % 2
            t = (a4 + r) % 2
    elif p == 3:
        r = (-b6) % 3 if b2 % 3 == 0 else (-_inv(b2, 3) * b4) % 3
        t = (a1 * r + a3) % 3
    else:
        if c4 % p == 0:
            r = (-_inv(12, p) * b2) % p
        else:
            r = (-_inv(12 * c4, p) * (c6 + b2 * c4)) % p
        t = (-_inv(2, p) * (a1 * r + a3)) % p
    ch.shift(r=r, t=t)
    a1, a2, a3, a4, a6 = ch.a
    b2, b4, b6, b8 = invariants_of(ch.a)[:4]
    if not (a3 % p == 0 and a4 % p == 0 and a6 % p == 0):
        raise ConsistencyError(f"singular point not moved to origin at p={p}")

    # multiplicative: I(n)
    if b2 % p:
        split = _quad_has_root(1, a1, -a2, p)
        red = Reduction.SPLIT if split else Reduction.NONSPLIT
        return _local(p, KodairaType("I", vd), 1, vd, red)

    if _val(p, a6) < 2:
        return _local(p, KodairaType("II"), vd, vd, Reduction.ADDITIVE)
    if _val(p, b8) < 3:
        return _local(p, KodairaType("III"), vd - 1, vd, Reduction.ADDITIVE)
    if _val(p, b6) < 3:
        return _local(p, KodairaType("IV"), vd - 2, vd, Reduction.ADDITIVE)

    # arrange p | a1, a2; p^2 | a3, a4; p^3 | a6
    if p == 2:
        s = a2 % 2
        t = 2 * (_div(a6, 4) % 2)
    elif p == 3:
        s, t = a1, a3
    else:
        h = _inv(2, p)
        s, t = -a1 * h, -a3 * h
    ch.shift(s=s, t=t)
    a1, a2, a3, a4, a6 = ch.a
    if not (a1 % p == 0 and a2 % p == 0 and a3 % p**2 == 0 and a4 % p**2 == 0 and a6 % p**3 == 0):
        raise ConsistencyError(f"could not reach the I0* normal form at p={p}")

    # cubic T^3 + b T^2 + c T + d
    b, c, d = a2 // p, a4 // p**2, a6 // p**3
    w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
    x = 3 * c - b * b
    if w % p:
        return _local(p, KodairaType("I0*"), vd - 4, vd, Reduction.ADDITIVE)

    if x % p:
        n = _in_star_subprocedure(ch, p, b, c, d, x)
        return _local(p, KodairaType("I*", n), vd - n - 4, vd, Reduction.ADDITIVE)

    # triple root: move it to T = 0
    if p == 2:
        r = b % 2
    elif p == 3:
        r = (-d) % 3
    else:
        r = (-b * _inv(3, p)) % p
    ch.shift(r=p * r)
    a1, a2, a3, a4, a6 = ch.a
    x3, x6 = _div(a3, p**2), _div(a6, p**4)
    if (x3 * x3 + 4 * x6) % p:
        return _local(p, KodairaType("IV*"), vd - 6, vd, Reduction.ADDITIVE)
    if p == 2:
        t = p * p * (x6 % 2)
    else:
        t = -p * p * ((x3 * _inv(2, p)) % p)
    ch.shift(t=t)
    a1, a2, a3, a4, a6 = ch.a
    if _val(p, a4) < 4:
        return _local(p, KodairaType("III*"), vd - 7, vd, Reduction.ADDITIVE)
    if _val(p, a6) < 6:
        return _local(p, KodairaType("II*"), vd - 8, vd, Reduction.ADDITIVE)
    raise NotMinimalError(p, ch.a, ch.iso)


def _in_star_subprocedure(ch: _Chart, p: int, b: int, c: int, d: int, x: int) -> int:
    """Resolve the I*(n) chain; returns n >= 1."""
    # move the double root of the cubic to T = 0
    if p == 2:
        r = c % 2
    elif p == 3:
        r = (c * _inv(b, 3)) % 3
    else:
        r = ((b * c - 9 * d) * _inv(2 * x, p)) % p
    ch.shift(r=p * r)
    mx = my = p * p
    n = 1
    while True:
        a1, a2, a3, a4, a6 = ch.a
        xa3, xa6 = _div(a3, my), _div(a6, mx * my)
        # quadratic in y: Y^2 + xa3 Y - xa6
        if (xa3 * xa3 + 4 * xa6) % p:
            return n
        if p == 2:
            t = my * (xa6 % 2)
        else:
            t = my * ((-xa3 * _inv(2, p)) % p)
        ch.shift(t=t)
        my *= p
        n += 1
        a1, a2, a3, a4, a6 = ch.a
        xa2, xa4, xa6 = _div(a2, p), _div(a4, p * mx), _div(a6, mx * my)
        # quadratic in x: xa2 X^2 + xa4 X + xa6
        if (xa4 * xa4 - 4 * xa2 * xa6) % p:
            return n
        if p == 2:
            r = mx * ((xa6 * xa2) % 2)
        else:
            r = mx * ((-xa4 * _inv(2 * xa2, p)) % p)
        ch.shift(r=r)
        mx *= p
        n += 1


def _local(p: int, kod: KodairaType, f: int, vd: int, red: Reduction) -> LocalData:
    return LocalData(p=p, kodaira=kod, f_p=f, vp_delta=vd, m_p=kod.components, reduction=red)


def ogg_verify(d: LocalData) -> bool:
    return d.f_p == d.vp_delta - d.m_p + 1


_F_CAP = {2: 8, 3: 5}


def check_local(d: LocalData) -> None:
    """Hard consistency checks on a LocalData record."""
    if not ogg_verify(d):
        raise ConsistencyError(f"Ogg's formula fails at p={d.p}: {d}")
    cap = _F_CAP.get(d.p, 2)
    if not 0 <= d.f_p <= cap:
        raise ConsistencyError(f"conductor exponent {d.f_p} out of range at p={d.p}")
    good = d.reduction is Reduction.GOOD
    if good != (d.f_p == 0) or good != (str(d.kodaira) == "I0"):
        raise ConsistencyError(f"good reduction mismatch at p={d.p}: {d}")
    if d.reduction.multiplicative != (d.kodaira.symbol == "I") or (
        d.reduction.multiplicative and d.f_p != 1
    ):
        raise ConsistencyError(f"multiplicative reduction mismatch at p={d.p}: {d}")
    if d.reduction is Reduction.ADDITIVE and d.f_p < 2:
        raise ConsistencyError(f"additive reduction with f_p < 2 at p={d.p}: {d}")


def minimize_at(ainvs: tuple[int, ...], p: int) -> tuple[WeierstrassModel, Isomorphism]:
    """Reduce the model at p alone, by repeatedly running Tate's algorithm.

    Independent of the Kraus-based global minimization; used as a
    cross-check and for local-only work.
    """
    iso = Isomorphism()
    model = tuple(ainvs)
    while True:
        try:
            _tate(model, p)
        except NotMinimalError as exc:
            scale = Isomorphism(p)
            model = tuple(int(a) for a in transform(exc.model, scale))
            iso = iso.compose(exc.iso).compose(scale)
            continue
        return to_model(model), iso


def conductor(
    m: WeierstrassModel, policy: FactorPolicy = DEFAULT_POLICY
) -> tuple[int, list[LocalData]]:
    """Conductor N and the local data at every prime dividing Delta_min."""
    mm = minimal_model(m, policy)
    locals_ = local_data(mm.minimal, mm.delta_min_abs, policy)
    n = 1
    for d in locals_:
        n *= d.p**d.f_p
    return n, locals_


def local_data(
    minimal: WeierstrassModel, delta_abs: int, policy: FactorPolicy = DEFAULT_POLICY
) -> list[LocalData]:
    out = []
    for p in factor_complete(delta_abs, policy).primes:
        d = tate_local(minimal, p)
        if d.f_p == 0:
            raise ConsistencyError(f"p={p} divides the minimal discriminant but f_p = 0")
        out.append(d)
    return out
