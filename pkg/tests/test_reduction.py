import math
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from _oracles import refiner_for, synthetic_input, violations_at_or_above
from kbpow.algebraics import dominant_root, g_value
from kbpow.certreal import const_log2, log_certified
from kbpow.reduction import (DEFAULT_ELL, ReductionError, Status, aggregate_bound,
                             cutoff, default_precision, dujella_petho, k_context, lemma_bound,
                             mu_star, phi_value, stage1, stage2, stage2_sweep_k)


def test_sqrt2_third_instance_is_sound():
    args = (2, Fraction(1, 3), 100, 1, 2)
    res = dujella_petho(synthetic_input(*args), 1, 40, refiner=refiner_for(*args))
    assert res.ok and res.bound > 0
    assert res.q > 600
    assert violations_at_or_above(*args, res.bound) == []


def test_q_too_small():
    res = dujella_petho(synthetic_input(2, Fraction(1, 3), 10**30, 1, 2), 1, 5)
    assert res.status is Status.Q_TOO_SMALL
    assert not res.ok and res.bound is None


def test_input_validation():
    with pytest.raises(ValueError):
        synthetic_input(2, Fraction(1, 3), 0, 1, 2)
    with pytest.raises(ValueError):
        synthetic_input(2, Fraction(1, 3), 5, 1, 1)
    with pytest.raises(ValueError):
        synthetic_input(2, Fraction(1, 3), 5, -1, 2)
    with pytest.raises(ValueError):
        dujella_petho(synthetic_input(2, Fraction(1, 3), 5, 1, 2), 0)


def test_certification_failure_without_refiner():
    # 64 bits cannot certify convergent 200 of sqrt 2
    inp = synthetic_input(2, Fraction(1, 3), 10**80, 1, 2, bits=64)
    with pytest.raises(ReductionError):
        dujella_petho(inp, 1, 200)


def test_lemma_bound_formula():
    b = lemma_bound(Fraction(36, 5), 2, 10**20, Fraction(1, 1000))
    assert b == pytest.approx(math.log(7.2 * 1e20 / 1e-3) / math.log(2), rel=1e-12)
    assert b >= math.log(7.2 * 1e20 / 1e-3) / math.log(2)


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(
    d=st.integers(2, 500).filter(lambda n: math.isqrt(n) ** 2 != n),
    num=st.integers(1, 97),
    den=st.integers(2, 97),
    M=st.integers(5, 300),
    A=st.sampled_from([1, 2, Fraction(36, 5), 10]),
    B=st.sampled_from([Fraction(13, 10), 2, 3, Fraction(5, 2)]),
)
def test_reduction_soundness(d, num, den, M, A, B):
    mu = Fraction(num, den)
    args = (d, mu, M, A, B)
    try:
        res = dujella_petho(synthetic_input(*args), 1, 60, refiner=refiner_for(*args))
    except ReductionError:
        assume(False)
    assume(res.ok)
    assert violations_at_or_above(*args, res.bound) == []


def test_default_precision():
    assert default_precision(119) == 64 + 10 * 125


def test_stage1_k3():
    res = stage1(3)
    assert res.ok and not res.advanced
    assert res.ell_used == DEFAULT_ELL
    assert 0 < res.bound < 843.978
    assert res.epsilon.is_positive()


def test_context_quantities():
    c = k_context(3)
    # gamma * log alpha encloses log 2
    back = c.gamma * c.log_alpha
    two = const_log2(c.precision_bits)
    assert abs(back - two).upper < Fraction(1, 2**1200)
    assert float(c.gamma) == pytest.approx(math.log(2) / math.log(1.8392867552141612), rel=1e-14)
    assert len(c.convs) == DEFAULT_ELL + 6
    assert c.convs[DEFAULT_ELL].q > 6 * c.M


def test_phi_limits():
    g = g_value(dominant_root(3, 256))
    assert phi_value(3, 400).lower_float() == pytest.approx(float(1 / g), rel=1e-15)
    a = dominant_root(3, 256).alpha
    ref = 1 / (g * (1 + 1 / a))
    assert phi_value(3, 1).contains_ball(ref) or ref.contains_ball(phi_value(3, 1))
    assert float(phi_value(3, 1)) == pytest.approx(float(ref), rel=1e-15)


def test_mu_star_is_log_phi_over_log_alpha():
    c = k_context(5)
    for gap in (1, 7, 40):
        ref = log_certified(phi_value(5, gap, c.precision_bits)) / c.log_alpha
        assert float(mu_star(c, gap)) == pytest.approx(float(ref), rel=1e-14)


def test_stage2_k3_gap1():
    res = stage2(3, 1)
    assert res.ok and 0 < res.bound < 2265.83


def test_stage2_sweep_single_k():
    s = stage2_sweep_k(4, gap_max=60)
    assert s.failures == ()
    assert 1 <= s.argmin_gap <= 60 and 1 <= s.argmax_gap <= 60
    assert s.min_epsilon > 0 and s.max_bound < 2265.83
    one = stage2(4, s.argmax_gap)
    assert one.bound == pytest.approx(s.max_bound)


def test_cutoff_and_aggregate():
    assert cutoff([1.5, 843.978, 12.0]) == 843
    assert aggregate_bound(2, 1e10, 1e-3, 2) == pytest.approx(math.log(2e13) / math.log(2))
