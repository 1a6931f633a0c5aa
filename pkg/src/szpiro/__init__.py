"""Local data of elliptic curves over Q and checks of Szpiro-type bounds
for curves whose j-invariant has a small denominator."""

from .arith import ApproxReal, Factorization, FactorPolicy, Verdict, factor, height, vp, vp_rational
from .core import (
    CurveRecord,
    PrimeReport,
    PrimeType,
    TheoremCheck,
    VerificationReport,
    check_prime_bound,
    classify_prime,
    curve_record,
    divisibility_check,
    height_bound_check,
    szpiro_ratio,
    theorem_check,
    verify,
)
from .minimal import MinimalModelResult, is_minimal, minimal_model
from .tate import KodairaType, LocalData, Reduction, conductor, ogg_verify, tate_local
from .weierstrass import (
    Isomorphism,
    SingularCurveError,
    StandardInvariants,
    WeierstrassModel,
    integralize,
    quadratic_twist,
    standard_invariants,
    transform,
)

__version__ = "0.1.0"
