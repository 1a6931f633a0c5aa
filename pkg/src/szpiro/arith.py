"""Exact integer/rational arithmetic helpers, factorization and interval logs.

Integers are plain Python ``int`` and rationals are ``fractions.Fraction``;
both are exact and unbounded, so this module only adds what the standard
library lacks: p-adic valuations, a budgeted factorizer, and a small
outward-rounded interval type used for the handful of inequalities that
involve logarithms.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Union

from mpmath import libmp

Rational = Fraction
RationalLike = Union[int, Fraction]


class ValuationError(ValueError):
    """Raised when asking for the valuation of zero."""


def vp(p: int, n: int) -> int:
    """Largest e with p**e dividing n (n must be nonzero)."""
    if n == 0:
        raise ValuationError("valuation of zero")
    if p < 2:
        raise ValueError(f"invalid prime {p}")
    n = abs(n)
    e = 0
    # peel off p^(2^k) chunks first so huge powers stay cheap
    pk = p
    stack = []
    while n % pk == 0:
        stack.append(pk)
        n //= pk
        e += 1 << (len(stack) - 1)
        pk = pk * pk
    while stack:
        pk = stack.pop()
        if n % pk == 0:
            n //= pk
            e += 1 << len(stack)
    return e


def vp_rational(p: int, q: RationalLike) -> int:
    q = Fraction(q)
    if q == 0:
        raise ValuationError("valuation of zero")
    return vp(p, q.numerator) - vp(p, q.denominator)


def num(q: RationalLike) -> int:
    """Absolute value of the reduced numerator."""
    return abs(Fraction(q).numerator)


def den(q: RationalLike) -> int:
    """The reduced denominator (always positive)."""
    return Fraction(q).denominator


# ---------------------------------------------------------------------------
# primality and factorization


# first 13 primes: a deterministic Miller-Rabin witness set below this bound
_DET_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_DET_BOUND = 3317044064679887385961981


@dataclass(frozen=True)
class FactorPolicy:
    trial_bound: int = 10**6
    rho_budget: int = 10**7
    mr_rounds: int = 40


DEFAULT_POLICY = FactorPolicy()


@lru_cache(maxsize=4)
def _primes_upto(bound: int) -> tuple[int, ...]:
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _mr_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int, rounds: int = 40) -> bool:
    """Miller-Rabin; exact below ~3.3e24, probabilistic (seeded) above."""
    if n < 2:
        return False
    for p in _DET_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_mr_round(n, d, s, a) for a in _DET_WITNESSES):
        return False
    if n < _DET_BOUND:
        return True
    # seeded by n so the answer is reproducible run to run
    rng = random.Random(n)
    return all(_mr_round(n, d, s, rng.randrange(2, n - 1)) for _ in range(rounds))


def _brent(n: int, budget: int, seed: int) -> tuple[int | None, int]:
    """One Pollard-Brent attempt. Returns (factor or None, steps used)."""
    rng = random.Random(seed)
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
    g = r = q = 1
    steps = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        steps += r
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            steps += min(m, r - k)
            g = math.gcd(q, n)
            k += m
        r *= 2
        if steps > budget:
            return None, steps
    if g == n:
        # backtrack one step at a time
        while True:
            ys = (ys * ys + c) % n
            steps += 1
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    if g == n:
        return None, steps
    return g, steps


@dataclass(frozen=True)
class Factorization:
    """Factorization of a positive magnitude ``n``.

    ``cofactor`` is 1 when the factorization is complete; otherwise it is the
    unfactored composite left over after the budget ran out.
    """

    n: int
    factors: tuple[tuple[int, int], ...]
    cofactor: int = 1

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def value(self) -> int:
        out = self.cofactor
        for p, e in self.factors:
            out *= p**e
        return out

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def __str__(self) -> str:
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors]
        if self.cofactor != 1:
            parts.append(f"({self.cofactor})")
        return " * ".join(parts) if parts else "1"


class FactorizationError(RuntimeError):
    """Factor budget exhausted; ``partial`` holds what was found."""

    def __init__(self, partial: Factorization):
        super().__init__(f"could not fully factor {partial.n}: cofactor {partial.cofactor}")
        self.partial = partial


def factor(n: int, policy: FactorPolicy = DEFAULT_POLICY) -> Factorization:
    """Factor |n|: trial division, then Pollard-Brent on what is left.

    Never raises on budget exhaustion; the result then carries a composite
    cofactor and ``complete`` is False.
    """
    if n == 0:
        raise ValueError("cannot factor zero")
    n = abs(n)
    found: dict[int, int] = {}
    m = n
    for p in _primes_upto(policy.trial_bound):
        if p * p > m:
            break
        if m % p == 0:
            e = vp(p, m)
            found[p] = e
            m //= p**e
    leftovers: list[int] = []
    if m > 1:
        pending = [m]
        budget = policy.rho_budget
        seed = 0
        while pending:
            x = pending.pop()
            if x == 1:
                continue
            if x <= policy.trial_bound**2 or is_probable_prime(x, policy.mr_rounds):
                # below trial_bound^2 a survivor of trial division is prime
                found[x] = found.get(x, 0) + 1
                continue
            root = math.isqrt(x)
            if root * root == x:
                pending += [root, root]
                continue
            if budget <= 0:
                leftovers.append(x)
                continue
            d, used = _brent(x, budget, seed)
            seed += 1
            budget -= used
            if d is None:
                pending.append(x)
            else:
                pending += [d, x // d]
    cofactor = math.prod(leftovers)
    return Factorization(n, tuple(sorted(found.items())), cofactor)


def factor_complete(n: int, policy: FactorPolicy = DEFAULT_POLICY) -> Factorization:
    fac = factor(n, policy)
    if not fac.complete:
        raise FactorizationError(fac)
    return fac


def primes_dividing(n: int, policy: FactorPolicy = DEFAULT_POLICY) -> tuple[int, ...]:
    return factor_complete(n, policy).primes


# ---------------------------------------------------------------------------
# outward-rounded intervals


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INDETERMINATE = "indeterminate"

    def __str__(self) -> str:
        return self.value


START_PREC = 60
MAX_PREC = 4096


def _round(q: Fraction, prec: int, rnd: str) -> Fraction:
    if q == 0:
        return q
    mpf = libmp.from_rational(q.numerator, q.denominator, prec, rnd)
    return _to_fraction(mpf)


def _to_fraction(mpf) -> Fraction:
    sign, man, exp, _ = mpf
    val = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -val if sign else val


def _log_bounds(x: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    if x <= 0:
        raise ValueError("log of a nonpositive number")
    if x == 1:
        return Fraction(0), Fraction(0)
    wp = prec + 10
    lo_arg = libmp.from_rational(x.numerator, x.denominator, wp, libmp.round_floor)
    hi_arg = libmp.from_rational(x.numerator, x.denominator, wp, libmp.round_ceiling)
    lo = _to_fraction(libmp.mpf_log(lo_arg, wp, libmp.round_floor))
    hi = _to_fraction(libmp.mpf_log(hi_arg, wp, libmp.round_ceiling))
    # one extra relative ulp each way: covers any last-bit slip inside mpf_log
    slack = Fraction(1, 2 ** (wp - 2))
    lo -= abs(lo) * slack
    hi += abs(hi) * slack
    return _round(lo, prec, libmp.round_floor), _round(hi, prec, libmp.round_ceiling)


@dataclass(frozen=True)
class ApproxReal:
    """A real number known to lie in ``[lo, hi]``.

    Endpoints are exact dyadic rationals rounded outward to ``prec`` bits
    after every operation, so the enclosure is rigorous.
    """

    lo: Fraction
    hi: Fraction
    prec: int = field(default=START_PREC, compare=False)

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, q: RationalLike, prec: int = START_PREC) -> "ApproxReal":
        q = Fraction(q)
        return cls._make(q, q, prec)

    @classmethod
    def log_of(cls, x: RationalLike, prec: int = START_PREC) -> "ApproxReal":
        lo, hi = _log_bounds(Fraction(x), prec)
        return cls(lo, hi, prec)

    @classmethod
    def _make(cls, lo: Fraction, hi: Fraction, prec: int) -> "ApproxReal":
        return cls(
            _round(lo, prec, libmp.round_floor), _round(hi, prec, libmp.round_ceiling), prec
        )

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def radius(self) -> Fraction:
        return (self.hi - self.lo) / 2

    def contains(self, q: RationalLike) -> bool:
        return self.lo <= Fraction(q) <= self.hi

    def _coerce(self, other) -> "ApproxReal":
        if isinstance(other, ApproxReal):
            return other
        return ApproxReal.exact(other, self.prec)

    def _prec_with(self, other: "ApproxReal") -> int:
        return min(self.prec, other.prec)

    def __add__(self, other):
        o = self._coerce(other)
        return ApproxReal._make(self.lo + o.lo, self.hi + o.hi, self._prec_with(o))

    __radd__ = __add__

    def __neg__(self):
        return ApproxReal(-self.hi, -self.lo, self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        ends = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return ApproxReal._make(min(ends), max(ends), self._prec_with(o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        ends = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi]
        return ApproxReal._make(min(ends), max(ends), self._prec_with(o))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def log(self) -> "ApproxReal":
        if self.lo <= 0:
            raise ValueError("log of an interval reaching zero or below")
        lo, _ = _log_bounds(self.lo, self.prec)
        _, hi = _log_bounds(self.hi, self.prec)
        return ApproxReal(lo, hi, self.prec)

    def __float__(self) -> float:
        return float(self.mid)

    def le(self, other) -> Verdict:
        """Three-valued ``self <= other``."""
        o = self._coerce(other)
        if self.hi <= o.lo:
            return Verdict.HOLDS
        if self.lo > o.hi:
            return Verdict.FAILS
        return Verdict.INDETERMINATE

    def __repr__(self) -> str:
        return f"ApproxReal([{float(self.lo)!r}, {float(self.hi)!r}], prec={self.prec})"


def decide_le(
    lhs: Callable[[int], ApproxReal],
    rhs: Callable[[int], ApproxReal],
    start: int = START_PREC,
    cap: int = MAX_PREC,
) -> Verdict:
    """Decide lhs <= rhs, doubling the working precision while undecided."""
    prec = start
    while True:
        verdict = lhs(prec).le(rhs(prec))
        if verdict is not Verdict.INDETERMINATE or prec >= cap:
            return verdict
        prec = min(2 * prec, cap)


def height(q: RationalLike, prec: int = START_PREC) -> ApproxReal:
    """Logarithmic height log max(|num q|, den q); h(0) = 0."""
    q = Fraction(q)
    return ApproxReal.log_of(max(abs(q.numerator), q.denominator), prec)


def prod_powers(pairs: Iterable[tuple[int, int]]) -> int:
    return math.prod(p**e for p, e in pairs)
