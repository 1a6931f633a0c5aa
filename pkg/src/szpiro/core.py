"""Per-curve verification of the small-denominator Szpiro bounds.

Bad primes are split by the sign of v_p(j) and the reduction type:

* Type 1: v_p(j) >= 0, checked against v_p(Delta) <= 5 v_p(N);
* Type 2: v_p(j) < 0, multiplicative, checked for v_p(Delta) = -v_p(j);
* Type 3: v_p(j) < 0, additive, checked against
  v_p(Delta) <= 3 v_p(N) - v_p(j) + delta_p with delta_2 = 8, else 0.

On top of the local checks sit the divisibility Delta | 16 den(j) N^5, the
height bound h(j) <= 16 N log N, and the Szpiro-type bound
Delta <= A 16^(B+1) N^(B+5) (log N)^B under den(j) <= A (log num j)^B.
Everything integral is decided exactly; only the two log-bearing statements
go through interval arithmetic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import (
    DEFAULT_POLICY,
    START_PREC,
    ApproxReal,
    FactorPolicy,
    Factorization,
    RationalLike,
    Verdict,
    decide_le,
    factor_complete,
    height,
    prod_powers,
    vp,
    vp_rational,
)
from .minimal import minimal_model
from .tate import ConsistencyError, LocalData, Reduction, local_data
from .weierstrass import WeierstrassModel


class PrimeType(enum.IntEnum):
    TYPE1 = 1
    TYPE2 = 2
    TYPE3 = 3


@dataclass(frozen=True)
class CurveRecord:
    minimal: WeierstrassModel
    delta_min: int  # signed
    delta_min_abs: int
    delta_factored: Factorization
    conductor: int
    conductor_factored: Factorization
    locals: tuple[LocalData, ...]
    j: Fraction

    @property
    def j_num(self) -> int:
        return abs(self.j.numerator)

    @property
    def j_den(self) -> int:
        return self.j.denominator

    def vp_j(self, p: int) -> Optional[int]:
        """v_p(j), with None standing for +infinity when j = 0."""
        return None if self.j == 0 else vp_rational(p, self.j)

    def local(self, p: int) -> LocalData:
        for d in self.locals:
            if d.p == p:
                return d
        raise KeyError(p)


def curve_record(m: WeierstrassModel, policy: FactorPolicy = DEFAULT_POLICY) -> CurveRecord:
    mm = minimal_model(m, policy)
    dfac = factor_complete(mm.delta_min_abs, policy)
    locals_ = tuple(local_data(mm.minimal, mm.delta_min_abs, policy))
    n = prod_powers((d.p, d.f_p) for d in locals_)
    nfac = Factorization(n, tuple((d.p, d.f_p) for d in locals_))
    rec = CurveRecord(
        minimal=mm.minimal,
        delta_min=mm.delta_min,
        delta_min_abs=mm.delta_min_abs,
        delta_factored=dfac,
        conductor=n,
        conductor_factored=nfac,
        locals=locals_,
        j=mm.minimal.j,
    )
    if n < 11:
        raise ConsistencyError(f"conductor {n} < 11 for {m}")
    if set(dfac.primes) != set(nfac.primes):
        raise ConsistencyError(f"bad primes of Delta and N differ for {m}")
    return rec


def classify_prime(d: LocalData, vpj: Optional[int]) -> PrimeType:
    """Type 1/2/3 of a bad prime; ``vpj=None`` means v_p(j) = +infinity (j = 0)."""
    if d.reduction is Reduction.GOOD:
        raise ValueError(f"p={d.p} has good reduction; only bad primes are classified")
    if vpj is None or vpj >= 0:
        return PrimeType.TYPE1
    if d.reduction.multiplicative:
        return PrimeType.TYPE2
    return PrimeType.TYPE3


@dataclass(frozen=True)
class PrimeReport:
    p: int
    prime_type: PrimeType
    vp_delta: int
    vp_N: int
    vp_j: Optional[int]
    delta_p: int
    bound_rhs: int
    satisfied: bool
    equality: bool


def check_prime_bound(
    p: int, prime_type: PrimeType, vp_delta: int, vp_N: int, vpj: Optional[int]
) -> PrimeReport:
    delta_p = 8 if (p == 2 and prime_type is PrimeType.TYPE3) else 0
    if prime_type is PrimeType.TYPE1:
        rhs = 5 * vp_N
        ok = vp_delta <= rhs
    elif prime_type is PrimeType.TYPE2:
        rhs = -vpj
        ok = vp_delta == rhs
    else:
        rhs = 3 * vp_N - vpj + delta_p
        ok = vp_delta <= rhs
    return PrimeReport(
        p=p,
        prime_type=PrimeType(prime_type),
        vp_delta=vp_delta,
        vp_N=vp_N,
        vp_j=vpj,
        delta_p=delta_p,
        bound_rhs=rhs,
        satisfied=ok,
        equality=vp_delta == rhs,
    )


def prime_reports(c: CurveRecord) -> list[PrimeReport]:
    out = []
    for d in c.locals:
        vpj = c.vp_j(d.p)
        out.append(check_prime_bound(d.p, classify_prime(d, vpj), d.vp_delta, d.f_p, vpj))
    return out


def divisibility_slack(c: CurveRecord) -> dict[int, int]:
    """Per bad prime: v_p(16 den(j) N^5) - v_p(Delta)."""
    out = {}
    for p, e in c.delta_factored.factors:
        rhs = (4 if p == 2 else 0) + (vp(p, c.j_den)) + 5 * c.conductor_factored.exponent(p)
        out[p] = rhs - e
    return out


def divisibility_check(c: CurveRecord) -> bool:
    """Delta | 16 den(j) N^5, by direct division and by valuations; both must agree."""
    direct = (16 * c.j_den * c.conductor**5) % c.delta_min_abs == 0
    by_primes = all(s >= 0 for s in divisibility_slack(c).values())
    if direct != by_primes:
        raise ConsistencyError(f"divisibility routes disagree for {c.minimal}")
    return direct


def height_bound_check(c: CurveRecord, start: int = START_PREC) -> Verdict:
    """h(j) <= 16 N log N, decided with precision escalation."""
    n = c.conductor
    return decide_le(
        lambda prec: height(c.j, prec),
        lambda prec: ApproxReal.log_of(n, prec) * (16 * n),
        start=start,
    )


@dataclass(frozen=True)
class TheoremCheck:
    A: Fraction
    B: Fraction
    applicable: Verdict
    holds: Verdict

    @property
    def consistent(self) -> bool:
        """The theorem's implication: applicable => holds."""
        return self.applicable is not Verdict.HOLDS or self.holds is Verdict.HOLDS


class ParameterError(ValueError):
    pass


def _positive(x: RationalLike, name: str) -> Fraction:
    x = Fraction(x)
    if x <= 0:
        raise ParameterError(f"{name} must be positive, got {x}")
    return x


def theorem_applicable(c: CurveRecord, A: RationalLike, B: RationalLike) -> Verdict:
    """Whether den(j) <= A (log num j)^B; never when num(j) <= 1."""
    A, B = _positive(A, "A"), _positive(B, "B")
    if c.j_num <= 1:
        return Verdict.FAILS
    # both sides positive, so compare logarithms
    return decide_le(
        lambda prec: ApproxReal.log_of(c.j_den, prec),
        lambda prec: ApproxReal.log_of(A, prec) + ApproxReal.log_of(c.j_num, prec).log() * B,
    )


def theorem_bound_holds(c: CurveRecord, A: RationalLike, B: RationalLike) -> Verdict:
    """Whether Delta <= A 16^(B+1) N^(B+5) (log N)^B."""
    A, B = _positive(A, "A"), _positive(B, "B")
    n = c.conductor

    def rhs(prec: int) -> ApproxReal:
        log_n = ApproxReal.log_of(n, prec)
        return (
            ApproxReal.log_of(A, prec)
            + ApproxReal.log_of(16, prec) * (B + 1)
            + log_n * (B + 5)
            + log_n.log() * B
        )

    return decide_le(lambda prec: ApproxReal.log_of(c.delta_min_abs, prec), rhs)


def theorem_check(c: CurveRecord, A: RationalLike = 1, B: RationalLike = 1) -> TheoremCheck:
    A, B = _positive(A, "A"), _positive(B, "B")
    return TheoremCheck(A, B, theorem_applicable(c, A, B), theorem_bound_holds(c, A, B))


RATIO_PREC = 53  # endpoints are then exact doubles, so JSON floats round-trip


def szpiro_ratio(c: CurveRecord, prec: int = RATIO_PREC) -> ApproxReal:
    """log Delta / log N as an interval (exactly 0 when Delta = 1)."""
    if c.delta_min_abs == 1:
        return ApproxReal.exact(0, prec)
    return ApproxReal.log_of(c.delta_min_abs, prec) / ApproxReal.log_of(c.conductor, prec)


@dataclass(frozen=True)
class VerificationReport:
    curve: CurveRecord
    primes: tuple[PrimeReport, ...]
    divisibility_ok: bool
    height_check: Verdict
    theorem: TheoremCheck
    szpiro_ratio: ApproxReal = field(compare=True)

    @property
    def lemmas_ok(self) -> bool:
        return all(r.satisfied for r in self.primes)

    @property
    def ok(self) -> bool:
        """Every check passed (an inapplicable theorem counts as passing)."""
        if not (self.lemmas_ok and self.divisibility_ok):
            return False
        if self.height_check is not Verdict.HOLDS:
            return False
        if self.theorem.applicable is Verdict.INDETERMINATE:
            return self.theorem.holds is Verdict.HOLDS
        return self.theorem.consistent

    def problems(self) -> list[str]:
        out = [
            f"p={r.p}: Type {int(r.prime_type)} bound violated "
            f"(v_p(Delta)={r.vp_delta}, rhs={r.bound_rhs})"
            for r in self.primes
            if not r.satisfied
        ]
        if not self.divisibility_ok:
            out.append("Delta does not divide 16 den(j) N^5")
        if self.height_check is not Verdict.HOLDS:
            out.append(f"height bound h(j) <= 16 N log N: {self.height_check}")
        if not self.ok and self.lemmas_ok and self.divisibility_ok and self.height_check is Verdict.HOLDS:
            out.append(
                f"theorem bound (A={self.theorem.A}, B={self.theorem.B}): "
                f"applicable={self.theorem.applicable}, holds={self.theorem.holds}"
            )
        return out


def verify(
    m: WeierstrassModel,
    A: RationalLike = 1,
    B: RationalLike = 1,
    policy: FactorPolicy = DEFAULT_POLICY,
) -> VerificationReport:
    """Full pipeline: minimize, factor, Tate at each bad prime, then every check.

    Raises ``FactorizationError`` when the discriminant cannot be factored
    within the policy's budget.
    """
    A, B = _positive(A, "A"), _positive(B, "B")
    c = curve_record(m, policy)
    return VerificationReport(
        curve=c,
        primes=tuple(prime_reports(c)),
        divisibility_ok=divisibility_check(c),
        height_check=height_bound_check(c),
        theorem=theorem_check(c, A, B),
        szpiro_ratio=szpiro_ratio(c),
    )
