"""Decision procedures for the a.s. small-time behaviour of X_t / t^kappa.

Every classification records the rule that produced it (``basis``) and the
integral verdicts it relied on.  An Inconclusive verdict anywhere raises
:class:`InconclusiveClassification`; nothing is guessed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import BvRequired, InconclusiveBracket, InconclusiveClassification, \
    InfiniteActivityRequired
from .integral_tests import (IntegralVerdict, critical_constant, d_K_star, lambda_I_star,
                             lambda_J_star, one_side_condition_2, test_33b, test_5_1,
                             test_condition_2, K_test)
from .measures import JumpMeasure, LevyProcessSpec, drift_delta, is_bv

ZERO = "Zero"
FINITE_POSITIVE = "FinitePositive"
FINITE_NEGATIVE = "FiniteNegative"
INFINITE = "Infinite"
MINUS_INFINITE = "MinusInfinite"
EQUALS_DRIFT = "EqualsDrift"
EQUALS_SIGMA = "EqualsSigma"
NOT_APPLICABLE = "NotApplicable"

NEVER = "never"
AT_MOST_ZERO = "at_most_zero"
AT_LEAST_ZERO = "at_least_zero"
NO_LIMIT = "no_limit"

_FLIP = {ZERO: ZERO, FINITE_POSITIVE: FINITE_NEGATIVE, FINITE_NEGATIVE: FINITE_POSITIVE,
         INFINITE: MINUS_INFINITE, MINUS_INFINITE: INFINITE, EQUALS_DRIFT: EQUALS_DRIFT,
         EQUALS_SIGMA: EQUALS_SIGMA, NOT_APPLICABLE: NOT_APPLICABLE}
_FLIP_REASON = {AT_MOST_ZERO: AT_LEAST_ZERO, AT_LEAST_ZERO: AT_MOST_ZERO}


@dataclass(frozen=True)
class Classification:
    kind: str
    basis: str
    value: float | None = None
    reason: str | None = None
    verdicts: tuple = field(default=(), compare=False)

    @property
    def crosses(self) -> bool:
        """True when the quantity is +infinity a.s."""
        return self.kind == INFINITE

    def flipped(self) -> Classification:
        """Classification of the same quantity for -X (sign reversal)."""
        value = -self.value if self.value is not None else None
        return replace(self, kind=_FLIP[self.kind], value=value,
                       reason=_FLIP_REASON.get(self.reason, self.reason))

    def to_dict(self):
        out = {"kind": self.kind, "basis": self.basis}
        if self.value is not None:
            out["value"] = self.value
        if self.reason is not None:
            out["reason"] = self.reason
        if self.verdicts:
            out["verdicts"] = {name: v.to_dict(trace=False) for name, v in self.verdicts}
        return out


@dataclass(frozen=True)
class QueryResult:
    kappa: float
    two_sided_limsup: Classification
    one_sided_limsup: Classification
    one_sided_liminf: Classification
    limit: Classification

    def to_dict(self):
        return {"kappa": self.kappa,
                "two_sided_limsup": self.two_sided_limsup.to_dict(),
                "one_sided_limsup": self.one_sided_limsup.to_dict(),
                "one_sided_liminf": self.one_sided_liminf.to_dict(),
                "limit": self.limit.to_dict()}


def _need(verdict: IntegralVerdict, name: str, basis: str) -> IntegralVerdict:
    if verdict.inconclusive:
        raise InconclusiveClassification(f"{name} is Inconclusive", verdict, basis)
    return verdict


def _critical(fn, name, basis):
    try:
        return fn()
    except InconclusiveBracket as exc:
        raise InconclusiveClassification(f"{name}: {exc}", exc.verdict, basis) from exc


def _from_lambda_I(m: JumpMeasure, basis: str) -> Classification:
    c = _critical(lambda: lambda_I_star(m), "lambda_I*", basis)
    lo = (("I(lo)", c.verdict_lo),) if c.verdict_lo else ()
    hi = (("I(hi)", c.verdict_hi),) if c.verdict_hi else ()
    if c.marker == "zero":
        return Classification(ZERO, basis, verdicts=lo + hi)
    if c.marker == "infinite":
        return Classification(INFINITE, basis, verdicts=lo + hi)
    return Classification(FINITE_POSITIVE, basis, c.value, verdicts=lo + hi)


# Drifts this small relative to gamma are round-off from centring, not a sign.
DRIFT_TOL = 1e-12


def _drift(s: LevyProcessSpec) -> float:
    delta = drift_delta(s)
    return 0.0 if abs(delta) <= DRIFT_TOL * (1.0 + abs(s.gamma)) else delta


def _finite_activity(s: LevyProcessSpec, kappa: float, basis_prefix: str):
    """X_t = delta t before the first jump, so the answer is exact."""
    if not (s.sigma2 == 0 and s.jump.is_finite):
        return None
    delta = _drift(s)
    basis = f"{basis_prefix}: finite activity, X_t = delta t near 0"
    if kappa < 1 or delta == 0:
        return Classification(ZERO, basis)
    if kappa == 1:
        return Classification(EQUALS_DRIFT, basis, delta)
    return Classification(INFINITE if delta > 0 else MINUS_INFINITE, basis)


def lil_limsup(s: LevyProcessSpec) -> Classification:
    """limsup |X_t| / sqrt(2 t log|log t|), which equals sigma a.s."""
    return Classification(EQUALS_SIGMA, "Khintchine LIL", math.sqrt(s.sigma2))


def classify_two_sided(s: LevyProcessSpec, kappa: float) -> Classification:
    """a.s. value of limsup |X_t| / t^kappa."""
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    if kappa < 0.5:
        return Classification(ZERO, "Khintchine LIL: kappa < 1/2")
    if s.sigma2 > 0:
        return Classification(INFINITE, "Khintchine LIL: sigma^2 > 0, kappa >= 1/2")
    if kappa == 0.5:
        return _from_lambda_I(s.jump, "Theorem 2")
    bv = is_bv(s.jump)
    delta = _drift(s) if bv else None
    if kappa > 1 and not bv:
        return Classification(INFINITE, "Table 1: kappa > 1, X not bv (Shtatland-Rogozin)")
    if kappa > 1 and delta != 0:
        return Classification(INFINITE, "Table 1: kappa > 1, X bv, delta != 0")
    if kappa == 1 and bv and delta != 0:
        return Classification(EQUALS_DRIFT, "Table 1: kappa = 1, X bv (lim X_t/t = delta)",
                               abs(delta))
    v = _need(test_condition_2(s.jump, kappa), "tail-power integral", "Theorem 1")
    if v.convergent:
        return Classification(ZERO, "Theorem 1(i)", verdicts=(("condition_2", v),))
    return Classification(INFINITE, "Theorem 1(ii)", verdicts=(("condition_2", v),))


def classify_one_sided(s: LevyProcessSpec, kappa: float, *,
                       w_side: str = "negative") -> Classification:
    """a.s. value of limsup X_t / t^kappa.

    ``w_side`` picks the side of the measure used for W in the J test; the
    default follows the spectrally negative part, "positive" is the literal
    reading of the displayed formula.
    """
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    if kappa < 0.5:
        return Classification(ZERO, "Table 2: kappa < 1/2 (Khintchine LIL)")
    if s.sigma2 > 0:
        return Classification(INFINITE, "Khintchine LIL: sigma^2 > 0, kappa >= 1/2")
    exact = _finite_activity(s, kappa, "Table 2")
    if exact is not None:
        return exact
    bv = is_bv(s.jump)
    if kappa == 0.5:
        if bv:
            return Classification(ZERO, "Table 2: kappa = 1/2, X bv (X_t = O(t))")
        return _from_lambda_I(s.jump, "Theorem 2")
    if not bv:
        if kappa >= 1:
            return Classification(INFINITE, "Table 2: kappa >= 1, X not bv (Shtatland-Rogozin)")
        return _theorem_3_1(s.jump, kappa, w_side)
    delta = _drift(s)
    if kappa < 1:
        return Classification(ZERO, "Table 2: 1/2 <= kappa <= 1, X bv (X_t = O(t))")
    if kappa == 1:
        if delta == 0:
            return Classification(ZERO, "Table 2: kappa = 1, X bv (lim X_t/t = delta = 0)")
        return Classification(EQUALS_DRIFT, "Table 2: kappa = 1, X bv (lim X_t/t = delta)",
                              delta)
    if delta < 0:
        return Classification(MINUS_INFINITE, "Table 2: kappa > 1, X bv, delta < 0",
                              reason=NEVER)
    if delta > 0:
        return Classification(INFINITE, "Table 2: kappa > 1, X bv, delta > 0")
    v = _need(test_5_1(s.jump, kappa), "zero-drift one-sided integral", "Theorem 3.2")
    if v.divergent:
        return Classification(INFINITE, "Theorem 3.2", verdicts=(("5.1", v),))
    return Classification(NOT_APPLICABLE, "Theorem 3.2 (converse)", reason=AT_MOST_ZERO,
                          verdicts=(("5.1", v),))


def _theorem_3_1(m: JumpMeasure, kappa: float, w_side: str) -> Classification:
    vp = _need(one_side_condition_2(m, kappa, "positive"), "positive tail-power integral",
               "Theorem 3.1")
    if vp.divergent:
        return Classification(INFINITE, "Theorem 3.1(i)", verdicts=(("positive_tail", vp),))
    vm = _need(one_side_condition_2(m, kappa, "negative"), "negative tail-power integral",
               "Theorem 3.1")
    verdicts = (("positive_tail", vp), ("negative_tail", vm))
    if vm.convergent:
        return Classification(ZERO, "Theorem 3.1(iii)", verdicts=verdicts)
    c = _critical(lambda: lambda_J_star(m, kappa, w_side), "lambda_J*", "Theorem 3.1")
    verdicts += tuple((f"J({name})", v) for name, v in
                      (("lo", c.verdict_lo), ("hi", c.verdict_hi)) if v is not None)
    if c.marker == "infinite":
        return Classification(INFINITE, "Theorem 3.1(ii)", verdicts=verdicts)
    if c.marker == "zero":
        return Classification(ZERO, "Theorem 3.1(iv)", verdicts=verdicts)
    # Only existence of the constant is known, not its value.
    return Classification(FINITE_POSITIVE, "Theorem 3.1(v)", verdicts=verdicts)


def _plus_infinity_limit(m: JumpMeasure, kappa: float):
    """Whether lim X_t/t^kappa = +inf for bv, zero drift, kappa > 1."""
    c = _critical(lambda: d_K_star(m, kappa), "d_K*", "Theorem 3.3")
    verdicts = tuple((f"K({name})", v) for name, v in
                     (("lo", c.verdict_lo), ("hi", c.verdict_hi)) if v is not None)
    if c.marker != "zero":
        return False, verdicts
    v = _need(test_33b(m), "negative-jump integral", "Theorem 3.3")
    return v.convergent, verdicts + (("33b", v),)


def classify_limit(s: LevyProcessSpec, kappa: float) -> Classification:
    """a.s. value of lim X_t / t^kappa where it exists."""
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    if kappa < 0.5:
        return Classification(ZERO, "Khintchine LIL: kappa < 1/2")
    if s.sigma2 > 0:
        return Classification(NOT_APPLICABLE, "Khintchine LIL: sigma^2 > 0", reason=NO_LIMIT)
    exact = _finite_activity(s, kappa, "lim")
    if exact is not None:
        return exact
    bv = is_bv(s.jump)
    if kappa < 1 and bv:
        return Classification(ZERO, "X bv: X_t = O(t)")
    if kappa == 0.5:
        two = _from_lambda_I(s.jump, "Theorem 2")
        if two.kind == ZERO:
            return two
        return Classification(NOT_APPLICABLE, "Theorem 2", reason=NO_LIMIT,
                              verdicts=two.verdicts)
    if kappa >= 1 and not bv:
        return Classification(NOT_APPLICABLE, "Shtatland-Rogozin: X not bv", reason=NO_LIMIT)
    delta = _drift(s) if bv else None
    if kappa == 1:
        if delta == 0:
            return Classification(ZERO, "X bv: lim X_t/t = delta = 0")
        return Classification(EQUALS_DRIFT, "X bv: lim X_t/t = delta", delta)
    if kappa > 1 and delta > 0:
        return Classification(INFINITE, "X bv, delta > 0")
    if kappa > 1 and delta < 0:
        return Classification(MINUS_INFINITE, "X bv, delta < 0")
    v = _need(test_condition_2(s.jump, kappa), "tail-power integral", "Theorem 1")
    if v.convergent:
        return Classification(ZERO, "Theorem 1(i)", verdicts=(("condition_2", v),))
    if kappa < 1:
        return Classification(NOT_APPLICABLE, "Theorem 1(ii)", reason=NO_LIMIT,
                              verdicts=(("condition_2", v),))
    up, up_verdicts = _plus_infinity_limit(s.jump, kappa)
    if up:
        return Classification(INFINITE, "Theorem 3.3", verdicts=up_verdicts)
    down, down_verdicts = _plus_infinity_limit(s.negated().jump, kappa)
    if down:
        return Classification(MINUS_INFINITE, "Theorem 3.3 (applied to -X)",
                              verdicts=down_verdicts)
    return Classification(NOT_APPLICABLE, "Theorem 3.3", reason=NO_LIMIT,
                          verdicts=up_verdicts + down_verdicts)


def classify_subordinator_liminf(m: JumpMeasure, gamma_exp: float) -> Classification:
    """Behaviour of T_t / t^gamma for a driftless subordinator with measure ``m``.

    Infinite: lim T_t/t^gamma = inf.  Zero: liminf = 0.  FinitePositive:
    liminf is some c in (0, inf).
    """
    if not gamma_exp > 1:
        raise ValueError("gamma must exceed 1")
    if not m.minus.is_zero:
        raise ValueError("a subordinator measure must live on (0, 1]")
    if m.plus.finite:
        raise InfiniteActivityRequired("the subordinator must have infinite activity")
    if not m.plus.bv:
        raise BvRequired("a subordinator measure must integrate x near 0")
    basis = "Lemma (subordinator liminf, d_K*)"
    c = _critical(lambda: critical_constant(lambda d: K_test(m, d, gamma_exp)), "d_K*", basis)
    verdicts = tuple((f"K_T({name})", v) for name, v in
                     (("lo", c.verdict_lo), ("hi", c.verdict_hi)) if v is not None)
    if c.marker == "zero":
        return Classification(INFINITE, basis, verdicts=verdicts)
    if c.marker == "infinite":
        return Classification(ZERO, basis, reason="liminf", verdicts=verdicts)
    return Classification(FINITE_POSITIVE, basis, reason="liminf", verdicts=verdicts)


def classify_query(s: LevyProcessSpec, kappa: float, *, w_side="negative") -> QueryResult:
    return QueryResult(
        kappa,
        classify_two_sided(s, kappa),
        classify_one_sided(s, kappa, w_side=w_side),
        classify_one_sided(s.negated(), kappa, w_side=w_side).flipped(),
        classify_limit(s, kappa),
    )
