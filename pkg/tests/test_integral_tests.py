import math

import mpmath as mp
import numpy as np
import pytest

from levy_smalltime import integral_tests as it
from levy_smalltime.asymptotics import AsymptoticExponent
from levy_smalltime.errors import (BvRequired, DomainError, EvaluationError, InconclusiveBracket,
                                   NonMonotoneVerdict)
from levy_smalltime.measures import (CompoundPoissonAtoms, StableLike, SumOf, VProfileLogLog,
                                     WProfileCritical, two_sided_stable)

from oracles import law_5_1_diverges, law_condition_2, law_J_exponent, law_subordinator_exponent


# -- engine ------------------------------------------------------------------


def test_sqrt_integral():
    v = it.classify_integral(lambda u: -0.5 * np.asarray(u), AsymptoticExponent(0.5))
    assert v.convergent and v.method == "analytic"
    assert v.value == pytest.approx(2 / 3, rel=1e-10)
    n = it.classify_integral(lambda u: -0.5 * np.asarray(u))
    assert n.convergent and n.method == "numeric"
    assert n.value == pytest.approx(2 / 3, rel=1e-10)


def test_one_over_x_diverges():
    v = it.classify_integral(lambda u: np.asarray(u, dtype=float), AsymptoticExponent(-1.0))
    assert v.divergent
    assert it.classify_integral(lambda u: np.asarray(u, dtype=float)).divergent


def test_log_squared_integrand():
    # 1/(x log^2(1/x)) on (0, 1/e]: u = log(1/x) turns it into u^-2 on [1, inf).
    def log_g(u):
        u = np.asarray(u, dtype=float)
        return u - 2.0 * np.log(u)

    v = it.classify_integral(log_g, AsymptoticExponent(-1.0, -2.0), u_min=1.0)
    assert v.convergent
    assert v.value == pytest.approx(1.0, rel=1e-6)


def test_verdict_invariants():
    v = it.classify_integral(lambda u: -0.5 * np.asarray(u))
    assert v.value >= 0 and math.isfinite(v.value)
    assert len(v.log_blocks) > 0 and v.probed_depth == it.DEFAULT_U_MAX


def test_non_finite_integrand():
    with pytest.raises(EvaluationError):
        it.classify_integral(lambda u: np.full(np.shape(u), np.nan))


REFERENCE_CASES = [
    (lambda u: -0.5 * u, lambda x: mp.sqrt(x)),
    (lambda u: 0.3 * u, lambda x: x ** mp.mpf(-0.3)),
    (lambda u: -2.0 * u + np.log(np.maximum(u, 1e-300)), lambda x: x * x * mp.log(1 / x)),
    (lambda u: -np.exp(u) + 2.0 * u, lambda x: mp.exp(-1 / x) / x ** 2),
]


@pytest.mark.parametrize("log_g,g", REFERENCE_CASES)
def test_value_matches_reference_quadrature(log_g, g):
    v = it.classify_integral(lambda u: log_g(np.asarray(u, dtype=float)))
    assert v.convergent
    mp.mp.dps = 30
    pts = [mp.mpf(10) ** -k for k in range(8, -1, -1)]
    ref = float(mp.quad(g, pts))
    assert abs(v.value - ref) <= 1e-4 * ref + v.remainder


# -- the named tests ---------------------------------------------------------


def test_condition_2_examples():
    assert it.test_condition_2(StableLike(1, 1, 1.2), 0.7).convergent
    assert it.test_condition_2(StableLike(1, 1, 1.2), 0.9).divergent
    assert it.test_condition_2(CompoundPoissonAtoms(((0.3, 1.0),)), 2.0).convergent
    with pytest.raises(DomainError):
        it.test_condition_2(StableLike(1, 1, 1.2), 0.5)


def test_I_examples():
    assert it.I_test(VProfileLogLog(), 1.5).convergent
    assert it.I_test(VProfileLogLog(), 1.2).divergent
    assert it.I_test(StableLike(1, 1, 1.5), 0.1).convergent


def test_J_examples():
    for lam in (0.01, 1.0, 100.0):
        assert it.J_test(StableLike(0, 1, 1.5), lam, 0.75).divergent
        assert it.J_test(StableLike(0, 1, 1.2), lam, 0.55).convergent
    wp = WProfileCritical(0.75, 1.0)
    assert it.J_test(wp, 2.0, 0.75).convergent
    assert it.J_test(wp, 0.5, 0.75).divergent
    with pytest.raises(DomainError):
        it.J_test(wp, 1.0, 1.0)


def test_K_examples():
    assert it.K_test(StableLike(1, 0, 0.8), 1.0, 1.5).convergent
    for d in (0.01, 1.0, 100.0):
        assert it.K_test(StableLike(1, 0, 0.5), d, 1.5).divergent
    assert it.K_test(StableLike(1, 0, 0.5), 1.0, 3.0).convergent


def test_5_1_examples():
    assert it.test_5_1(two_sided_stable(0.7, 0.3), 2.0).divergent
    assert it.test_5_1(two_sided_stable(0.2, 0.6), 2.0).convergent
    m = SumOf((CompoundPoissonAtoms(((0.3, 1.0),)), StableLike(0, 1, 0.6)))
    assert it.test_5_1(m, 2.0).convergent
    with pytest.raises(BvRequired):
        it.test_5_1(StableLike(1, 1, 1.5), 2.0)


def test_33b_examples():
    assert it.test_33b(two_sided_stable(0.8, 0.4)).convergent
    assert it.test_33b(two_sided_stable(0.4, 0.8)).divergent
    v = it.test_33b(StableLike(1, 0, 0.5))
    assert v.convergent and v.value == 0.0
    # Pi+ vanishes near 0 while Pi- has mass: Divergent by convention.
    assert it.test_33b(StableLike(0, 1, 0.5)).divergent


# -- exponent laws against the frozen oracles --------------------------------


@pytest.mark.parametrize("alpha", [0.4, 0.8, 1.2, 1.6])
@pytest.mark.parametrize("kappa", [0.55, 0.7, 0.9, 1.5, 3.0])
def test_condition_2_law(alpha, kappa):
    if abs(alpha * kappa - 1.0) < 1e-9:
        pytest.skip("critical")
    v = it.test_condition_2(StableLike(1, 1, alpha), kappa)
    assert v.convergent == law_condition_2(alpha, kappa)


@pytest.mark.parametrize("alpha", [0.3, 1.2, 1.5, 1.9])
@pytest.mark.parametrize("kappa", [0.55, 0.75, 0.9])
def test_J_law(alpha, kappa):
    e = law_J_exponent(alpha, kappa)
    v = it.J_test(StableLike(0, 1, alpha), 1.0, kappa)
    assert v.divergent == (e > 0)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
@pytest.mark.parametrize("gamma", [1.5, 2.0, 3.0, 5.0])
def test_K_law(alpha, gamma):
    e = law_subordinator_exponent(alpha, gamma)
    if abs(e) < 1e-9:
        pytest.skip("critical")
    assert it.K_test(StableLike(1, 0, alpha), 1.0, gamma).convergent == (e < 0)


# -- equivalent forms --------------------------------------------------------

COND2_FAMILIES = {
    "stable_1.2": StableLike(1, 1, 1.2),
    "neg_stable_0.5": StableLike(0, 1, 0.5),
    "atoms": CompoundPoissonAtoms(((0.3, 1.0), (-0.6, 0.5))),
    "loglog": VProfileLogLog(),
}


@pytest.mark.parametrize("name", sorted(COND2_FAMILIES))
@pytest.mark.parametrize("kappa", [0.6, 0.75, 0.9, 1.5, 3.0])
def test_condition_2_forms_agree(name, kappa):
    m = COND2_FAMILIES[name]
    v = it.test_condition_2(m, kappa)
    other = dict(v.related)["moment_form"]
    assert v.outcome == other.outcome
    assert not [n for n in v.notes if n.startswith("consistency")]
    # Numeric routes may be undecided but never contradict each other.
    raw = it.test_condition_2(m, kappa, use_hints=False)
    raw_other = dict(raw.related)["moment_form"]
    decided = {raw.outcome, raw_other.outcome} - {it.INCONCLUSIVE}
    assert len(decided) <= 1 and decided <= {v.outcome}


GRID_5_1 = [(ap, am, k) for ap in (0.2, 0.5, 0.8) for am in (0.2, 0.5, 0.8) if ap != am
            for k in (1.5, 3.0)]


@pytest.mark.parametrize("ap,am,kappa", GRID_5_1)
def test_5_1_forms_agree(ap, am, kappa):
    m = two_sided_stable(ap, am)
    for hints in (True, False):
        v = it.test_5_1(m, kappa, use_hints=hints)
        assert v.outcome == dict(v.related)["min_form"].outcome
        assert v.divergent == law_5_1_diverges(ap, am, kappa)


# -- engine self-consistency --------------------------------------------------
# Analytic and numeric routes must agree wherever the numeric route decides.
# Integrands that decay only like a power of log(1/x) (I on the loglog profile,
# J on the critical W profile) sit outside what block-ratio tests can see; the
# numeric route calls them Divergent and they are left out here on purpose.


def _power_law_verdicts():
    out = []
    for a in (0.3, 0.8, 1.2, 1.7):
        m = StableLike(1, 1, a)
        out += [it.test_condition_2(m, k) for k in (0.6, 0.9, 1.5)]
        out += [it.I_test(m, x) for x in (0.1, 1.0, 10.0)]
    for a in (0.2, 0.5, 0.8):
        out += [it.K_test(StableLike(1, 0, a), 1.0, g) for g in (1.5, 3.0)]
    for a in (0.3, 1.5):
        out += [it.J_test(StableLike(0, 1, a), 1.0, k) for k in (0.55, 0.75)]
    out += [it.test_5_1(two_sided_stable(ap, am), k) for ap, am, k in GRID_5_1]
    out += [it.test_33b(two_sided_stable(ap, am)) for ap, am in ((0.8, 0.4), (0.4, 0.8))]
    return out


def test_analytic_and_numeric_agree():
    verdicts = _power_law_verdicts()
    decided = 0
    for v in verdicts:
        if v.numeric_outcome in (it.CONVERGENT, it.DIVERGENT):
            decided += 1
            assert v.numeric_outcome == v.outcome, v
    assert decided >= 0.9 * len(verdicts)


# -- monotonicity in the parameter -------------------------------------------


def _never_converges_then_diverges(outcomes):
    for lo, hi in zip(outcomes, outcomes[1:]):
        assert not (lo == it.CONVERGENT and hi == it.DIVERGENT), outcomes


@pytest.mark.parametrize("m", [VProfileLogLog(), StableLike(1, 1, 1.5),
                               CompoundPoissonAtoms(((0.3, 1.0),))], ids=repr)
def test_I_monotone(m):
    grid = np.linspace(0.2, 3.0, 10)
    _never_converges_then_diverges([it.I_test(m, a).outcome for a in grid])


@pytest.mark.parametrize("m,kappa", [(WProfileCritical(0.75, 1.0), 0.75),
                                     (WProfileCritical(0.6, 3.0), 0.6),
                                     (StableLike(0, 1, 1.5), 0.75)], ids=repr)
def test_J_monotone(m, kappa):
    grid = np.geomspace(0.05, 20.0, 10)
    _never_converges_then_diverges([it.J_test(m, lam, kappa).outcome for lam in grid])


@pytest.mark.parametrize("m,kappa", [(StableLike(1, 0, 0.8), 1.5), (StableLike(1, 0, 0.5), 1.5),
                                     (StableLike(1, 0, 0.5), 2.0)], ids=repr)
def test_K_monotone(m, kappa):
    grid = np.geomspace(1e-3, 1e3, 10)
    _never_converges_then_diverges([it.K_test(m, d, kappa).outcome for d in grid])


# -- critical constants -------------------------------------------------------


def test_lambda_I_loglog_is_sqrt2():
    c = it.lambda_I_star(VProfileLogLog())
    assert c.marker == "finite"
    assert c.value == pytest.approx(math.sqrt(2.0), abs=0.02)
    lo, hi = c.bracket
    assert lo < hi and c.verdict_lo.divergent and c.verdict_hi.convergent


def test_markers():
    c = it.lambda_I_star(StableLike(1, 1, 1.5))
    assert c.marker == "zero" and c.value == 0.0
    c = it.lambda_J_star(StableLike(0, 1, 1.5), 0.75)
    assert c.marker == "infinite" and math.isinf(c.value)


@pytest.mark.parametrize("c", [1.0, 2.0, 4.0])
def test_lambda_J_critical_profile(c):
    # J reduces to the integral of u^(-lambda c) du, so lambda_J* = 1/c.
    got = it.lambda_J_star(WProfileCritical(0.75, c), 0.75)
    assert got.value == pytest.approx(1.0 / c, rel=2e-3)


def _fake(rule):
    def test(p):
        return it.IntegralVerdict(rule(p), "analytic")
    return test


def test_inconclusive_bracket():
    with pytest.raises(InconclusiveBracket):
        it.critical_constant(_fake(lambda p: it.INCONCLUSIVE))


def test_non_monotone_detected():
    # Bisection settles near 1.5; the stray Convergent window sits exactly
    # where the probe below the bracket lands.
    def rule(p):
        return it.CONVERGENT if 0.7 < p < 0.8 or p >= 1.5 else it.DIVERGENT

    with pytest.raises(NonMonotoneVerdict):
        it.critical_constant(_fake(rule))


def test_bracket_threshold():
    c = it.critical_constant(_fake(lambda p: it.CONVERGENT if p >= 7.3 else it.DIVERGENT))
    assert c.bracket[0] < 7.3 <= c.bracket[1]
    assert c.bracket[1] - c.bracket[0] < 1e-3 * c.bracket[1]
