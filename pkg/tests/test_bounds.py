import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st

from burgess.bounds import (
    DomainError,
    LogReal,
    appendix_log_divisor_ceiling,
    appendix_phi_ratio_ceiling,
    aq_ratio_floor,
    burgess_bound_corollary,
    burgess_bound_theorem,
    check_q_conditions,
    classic_bounds,
    constant_chain,
    lambda2_prime,
    recursion_unroll,
    threshold_facts,
    trivial_bound_suffices,
)

GAMMA = 0.5772156649015329


def test_logreal_examples():
    x = LogReal(100.0)
    assert (x + x).log_value == pytest.approx(100 + math.log(2), abs=1e-12)
    assert (x ** (1 / 8)).log_value == pytest.approx(12.5)
    assert LogReal.zero() + x == x
    assert (x - x).is_zero
    with pytest.raises(DomainError):
        LogReal.zero() ** 0
    with pytest.raises(DomainError):
        LogReal.zero() ** -1.5
    assert float(LogReal.zero() ** 2) == 0


def test_logreal_huge_values():
    q = LogReal(math.exp(9.594))  # about 8e6373
    assert q.log10 == pytest.approx(6373.90, abs=0.01)
    assert q.scientific().startswith("8.031")
    assert (q * q).log_value == pytest.approx(2 * math.exp(9.594))
    assert q > LogReal.of(1e300)


pos = st.floats(min_value=1e-50, max_value=1e50, allow_nan=False)


@settings(max_examples=300)
@given(pos, pos)
def test_logreal_matches_floats(a, b):
    A, B = LogReal.of(a), LogReal.of(b)
    assert float(A + B) == pytest.approx(a + b, rel=1e-12)
    assert float(A * B) == pytest.approx(a * b, rel=1e-12)
    assert float(A / B) == pytest.approx(a / b, rel=1e-12)
    assert (A < B) == (a < b) or math.isclose(a, b, rel_tol=1e-15)
    if a > b * (1 + 1e-9):
        assert float(A - B) == pytest.approx(a - b, rel=1e-6)


@settings(max_examples=100)
@given(pos, st.floats(min_value=-4, max_value=4))
def test_logreal_pow(a, p):
    assume(abs(p * math.log(a)) < 600)
    assert float(LogReal.of(a) ** p) == pytest.approx(a**p, rel=1e-12)


def test_logreal_subtraction_domain():
    with pytest.raises(DomainError):
        LogReal.of(1.0) - LogReal.of(2.0)


def test_classic_examples():
    t, pv = classic_bounds(16.0, 8.0)
    assert t.log_value == 8 and pv.log_value == pytest.approx(8 + math.log(16))
    t, _ = classic_bounds(10.0, 0.0)
    assert float(t) == 1
    t, pv = classic_bounds(math.log(1e6), math.log(1e3))
    assert float(pv) / float(t) == pytest.approx(math.log(1e6))


def direct_theorem(q, N, omega, d, ratio):
    return math.sqrt(N) * q ** (3 / 16) * 9.07 * math.log(q) ** 0.25 * (2**omega * d) ** 0.75 * ratio**0.5


def test_theorem_desk_value():
    rep = burgess_bound_theorem(math.log(997), math.log(74), 1, 2, Fraction(997, 996), relaxed=True)
    assert not rep.in_hypothesis
    assert float(rep.value) == pytest.approx(direct_theorem(997, 74, 1, 2, 997 / 996), rel=1e-12)
    assert rep.inputs["phi_ratio"] == "997/996"
    checked = rep.against(20.0)
    assert checked.holds_vs and 0 < checked.ratio < 1


def test_theorem_domain():
    with pytest.raises(DomainError):
        burgess_bound_theorem(math.log(997), math.log(75), 1, 2, 1.001, relaxed=True)
    with pytest.raises(DomainError):
        burgess_bound_theorem(math.log(997), math.log(74), 1, 2, 1.001)
    with pytest.raises(DomainError):
        burgess_bound_theorem(math.log(997), math.log(10), 1, 2, 0.5, relaxed=True)
    rep = burgess_bound_theorem(math.exp(9.6), math.exp(9.6) / 2, 5, 32, 3.0)
    assert rep.in_hypothesis and rep.value.log10 > 0


@settings(max_examples=100)
@given(st.floats(2.0, 30.0), st.floats(0.0, 1.0), st.integers(0, 8))
def test_corollary_dominates_theorem_with_phi_ceiling(loglog, frac, omega):
    log_q = math.exp(loglog)
    log_N = frac * 5 / 8 * log_q
    d = 2**omega
    ceiling = appendix_phi_ratio_ceiling(loglog)
    thm = burgess_bound_theorem(log_q, log_N, omega, d, ceiling, relaxed=True)
    cor = burgess_bound_corollary(loglog, log_N, omega, d, relaxed=True)
    assert cor.value >= thm.value


def test_corollary_at_threshold():
    L = 9.594
    log_q = math.exp(L)
    rep = burgess_bound_corollary(L, log_q / 2, 10, LogReal(appendix_log_divisor_ceiling(L)))
    assert rep.in_hypothesis and math.isfinite(rep.value.log_value)
    with pytest.raises(DomainError):
        burgess_bound_corollary(9.0, 1.0, 1, 2)


def test_lambda2_example():
    got = lambda2_prime(math.log(997), 1, 2, Fraction(997, 996))
    want = 3.3325 * math.log(997) ** 0.25 * (996 / 997) ** -0.5 * 4**0.75
    assert float(got) == pytest.approx(want, rel=1e-12)
    assert float(got) >= 1
    with pytest.raises(DomainError):
        lambda2_prime(1.0, 1, 2, 1.0)


def test_trivial_bound_suffices():
    lam = 2.0
    log_q = math.log(10**6)
    edge = 2 * math.log(lam) + 3 / 8 * log_q
    assert trivial_bound_suffices(log_q, edge - 1e-9, lam)
    assert not trivial_bound_suffices(log_q, edge + 1e-9, lam)


def test_q_conditions():
    at = check_q_conditions(9.594)
    assert at.cond_simplified
    low = check_q_conditions(2.0)
    assert not low.cond_simplified
    # with the real omega and q/phi of a small q the size condition is a plain inequality
    c = check_q_conditions(math.log(math.log(10**40)), omega=1, phi_ratio=1.0)
    assert c.cond_size == (10**5 >= 10 * (2 * 1 + 1))
    with pytest.raises(DomainError):
        check_q_conditions(0.0)
    with pytest.raises(DomainError):
        check_q_conditions(5.0, C=1.0)


def test_aq_ratio_floor():
    v = float(aq_ratio_floor(9.594))
    assert v == pytest.approx(0.5 / (math.exp(GAMMA) * 9.594 + 3 / 9.594))
    assert v == pytest.approx(0.0287, abs=5e-5)
    with pytest.raises(DomainError):
        aq_ratio_floor(5.0)
    assert float(aq_ratio_floor(5.0, relaxed=True)) > v


def closed_form_partial(lam, q, N, K):
    r = 2 / math.sqrt(10)
    return lam * math.sqrt(N) * q ** (3 / 16) * (1 - r ** (K + 1)) / (1 - r) + N / 5 ** (K + 1)


def test_recursion_unroll():
    lam, q, N = 3.0, 10**6, 5000
    parts, limit = recursion_unroll(lam, math.log(q), math.log(N), 60)
    assert float(parts[0]) == pytest.approx(lam * math.sqrt(N) * q ** (3 / 16) + N / 5)
    for K in (0, 1, 5, 40, 60):
        assert float(parts[K]) == pytest.approx(closed_form_partial(lam, q, N, K), rel=1e-12)
    assert float(limit) == pytest.approx(lam * math.sqrt(N) * q ** (3 / 16) * math.sqrt(10) / (math.sqrt(10) - 2))
    # The tail of the geometric series is r^(K+1)/(1-r) of the limit.
    r = 2 / math.sqrt(10)
    gap = 1 - float(parts[60]) / float(limit)
    assert gap == pytest.approx(r**61, rel=1e-3)
    with pytest.raises(DomainError):
        recursion_unroll(lam, 1.0, 1.0, -1)


def test_recursion_unroll_monotone_after_dip():
    lam, q, N = 1.0, 10**4, 300
    parts, limit = recursion_unroll(lam, math.log(q), math.log(N), 80)
    vals = [float(p) for p in parts]
    k = vals.index(min(vals))
    assert all(a >= b for a, b in zip(vals[: k + 1], vals[1 : k + 1]))
    assert all(a <= b for a, b in zip(vals[k:], vals[k + 1 :]))
    assert vals[-1] <= float(limit) * (1 + 1e-12)


def test_threshold_facts():
    f = threshold_facts()
    assert f["matches_8.03104e6373"]
    assert f["exponent10"] == 6373
    assert f["a_bound_holds"]
    assert f["cutoff_consistent"]
    with mpmath.workdps(50):
        lq = mpmath.exp(mpmath.mpf("9.594")) / mpmath.log(10)
        mant = mpmath.power(10, lq - mpmath.floor(lq))
    assert float(mant) == pytest.approx(f["mantissa"], rel=1e-12)


def test_constant_chain():
    c = constant_chain()
    assert 9.066 <= c["final_constant"] <= 9.07
    assert 12.10 <= c["corollary_constant"] <= 12.11
    assert 1.684 <= c["corollary_loglog_constant"] <= 1.69
    assert c["geometric_error"] <= mpmath.mpf("1e-25")
    with mpmath.workdps(40):
        s10 = mpmath.sqrt(10)
        assert abs(c["final_constant"] - s10 / (s10 - 2) * mpmath.mpf("3.3325")) < mpmath.mpf("1e-35")
        assert abs(c["corollary_loglog_constant"] - 3 * mpmath.exp(-mpmath.euler)) < mpmath.mpf("1e-35")


mid = st.floats(min_value=-300, max_value=300, allow_nan=False)


@settings(max_examples=300)
@given(mid, mid, mid)
def test_logreal_algebra(a, b, c):
    A, B, C = LogReal(a), LogReal(b), LogReal(c)
    ulp = 4 * math.ulp(max(abs(a), abs(b), abs(c), 1.0))
    assert abs((A + B).log_value - (B + A).log_value) <= ulp
    assert abs(((A + B) + C).log_value - (A + (B + C)).log_value) <= 2 * ulp
    assert ((A + B) * C).log_value == pytest.approx((A * C + B * C).log_value, abs=2 * ulp)
    assert (A * B).log_value == a + b
    assert (A <= B) or (B <= A)


@settings(max_examples=200)
@given(st.integers(3, 10**6), st.floats(0, 1), st.integers(0, 6), st.integers(1, 64), st.floats(1, 5))
def test_theorem_matches_direct_evaluation(q, frac, omega, d, ratio):
    N = max(1, int(frac * q ** (5 / 8)))
    assume(N**8 <= q**5)
    rep = burgess_bound_theorem(math.log(q), math.log(N), omega, d, ratio, relaxed=True)
    assert float(rep.value) == pytest.approx(direct_theorem(q, N, omega, d, ratio), rel=1e-10)


@settings(max_examples=200)
@given(st.floats(3, 50), st.floats(0, 0.5), st.integers(0, 6), st.floats(1, 100), st.floats(1, 5), st.integers(0, 3))
def test_theorem_monotone(log_q, frac, omega, d, ratio, which):
    log_N = frac * log_q
    base = dict(log_N=log_N, omega=omega, d=d, phi_ratio=ratio)
    bumped = dict(base)
    key = ["log_N", "omega", "d", "phi_ratio"][which]
    bumped[key] = base[key] + (0.1 * log_q if key == "log_N" else 1)
    assume(bumped["log_N"] <= 5 / 8 * log_q)
    lo = burgess_bound_theorem(log_q, relaxed=True, **base)
    hi = burgess_bound_theorem(log_q, relaxed=True, **bumped)
    assert hi.value >= lo.value
