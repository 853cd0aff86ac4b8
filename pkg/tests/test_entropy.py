"""Entropy profiles, their flattenings, and the variational Phi transform."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isocert.entropy import (
    EntropyFunction,
    F_tau,
    check_assumptions,
    conjugate_Phi,
    eval_F_tau,
    eval_psi_tau_beta,
    lemma32_bound_check,
    log_Phi,
    log_entropy,
    psi_derivative,
)


class TestLogEntropy:
    def test_basic_values(self, F_log):
        assert F_log(1.0) == 0.0
        assert F_log(np.e) == pytest.approx(1.0, rel=1e-15)
        assert F_log.derivative(2.0) == pytest.approx(0.5, rel=1e-12)

    def test_log_form_evaluation_reaches_huge_arguments(self, F_log):
        assert F_log.at_log(1500.0) == 1500.0

    def test_at_log_overflow_without_log_form(self):
        fplain = EntropyFunction(fn=lambda y: np.log(y))
        assert fplain.at_log(10.0) == pytest.approx(10.0)
        with pytest.raises(OverflowError):
            fplain.at_log(800.0)

    def test_derivative_fallback_is_central_difference(self):
        fplain = EntropyFunction(fn=lambda y: np.log(y))
        assert fplain.derivative(3.0) == pytest.approx(1.0 / 3.0, rel=1e-6)


class TestFlattenedProfile:
    def test_threshold_is_where_base_reaches_one(self, F_half):
        assert F_half.x0 == pytest.approx(np.e, rel=1e-12)

    def test_value_above_threshold_by_hand(self, F_half):
        # ((log e^4)^{1/2} - 1) / (1/2) + 1 = 2(2 - 1) + 1 = 3
        assert float(F_half(np.e ** 4.0)) == pytest.approx(3.0, rel=1e-14)

    def test_matches_base_below_threshold(self, F_half, F_log):
        y = np.array([0.1, 0.5, 1.0, 2.0, np.e])
        assert np.allclose(F_half(y), F_log(y), rtol=1e-14)

    def test_continuous_and_smooth_at_threshold(self, F_half):
        h = 1e-8
        x0 = F_half.x0
        jump = float(F_half(x0 + h) - F_half(x0 - h))
        assert jump == pytest.approx(0.0, abs=1e-7)
        slope = float(F_half.derivative(np.array([x0 * 1.0000001]))[0])
        assert slope == pytest.approx(1.0 / x0, rel=1e-5)

    def test_tau_one_is_the_base_profile(self, F_log):
        F1 = F_tau(1.0)
        y = np.geomspace(0.01, 1e6, 50)
        assert np.allclose(F1(y), F_log(y), rtol=1e-12)

    def test_concave_increasing_with_zero_at_one(self, F_half):
        rep = check_assumptions(F_half)
        assert rep.a1 and rep.a2

    def test_tau_validation(self):
        with pytest.raises(ValueError):
            F_tau(0.0)
        with pytest.raises(ValueError):
            F_tau(1.5)
        with pytest.raises(ValueError):
            eval_F_tau(log_entropy(), 0.5, np.array([-1.0]))

    def test_log_form_agrees_with_direct_form(self, F_half):
        u = np.array([-2.0, 0.0, 1.0, 5.0, 40.0])
        assert np.allclose(F_half.at_log(u), F_half(np.exp(u)), rtol=1e-12)


class TestConcavePerturbation:
    def test_identity_below_one(self):
        x = np.array([0.1, 0.5, 1.0])
        assert np.allclose(eval_psi_tau_beta(1.0, 4.0, x), x, rtol=0)

    def test_value_above_one_by_hand(self):
        # beta/2 ((1 + tau(x-1))^{2/(tau beta)} - 1) + 1 at tau=1, beta=4, x=5:
        # 2 (5^{1/2} - 1) + 1
        want = 2.0 * (np.sqrt(5.0) - 1.0) + 1.0
        assert eval_psi_tau_beta(1.0, 4.0, 5.0) == pytest.approx(want, rel=1e-14)
        assert eval_psi_tau_beta(1.0, 4.0, 5.0) == pytest.approx(3.4721359549995796, rel=1e-14)

    def test_identity_member_of_family(self):
        x = np.linspace(0.0, 20.0, 101)
        assert np.allclose(eval_psi_tau_beta(0.5, 4.0, x), x, rtol=1e-12)

    def test_composition_flattens_the_exponent(self, F_log):
        # psi_{tau, beta} after the tau-flattening gives the 2/beta-flattening
        tau, beta = 0.5, 4.0
        Ft = F_tau(tau)
        Fb = F_tau(2.0 / beta)
        y = np.geomspace(1.0, 1e8, 200)
        composed = eval_psi_tau_beta(tau, beta, Ft(y))
        assert np.allclose(composed, Fb(y), rtol=1e-12)

    def test_derivative_matches_difference_quotient(self):
        x = np.array([0.5, 2.0, 7.0])
        h = 1e-7
        fd = (eval_psi_tau_beta(0.5, 4.0, x + h) - eval_psi_tau_beta(0.5, 4.0, x - h)) / (2 * h)
        assert np.allclose(psi_derivative(0.5, 4.0, x), fd, rtol=1e-5)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            eval_psi_tau_beta(0.4, 4.0, 1.0)  # tau below 2/beta
        with pytest.raises(ValueError):
            eval_psi_tau_beta(1.0, -1.0, 1.0)


class TestPhiTransform:
    def test_log_profile_gives_exponential(self, F_log):
        x = np.linspace(0.0, 5.0, 101)
        table = conjugate_Phi(F_log, x)
        rel = np.abs(table.values - np.exp(x)) / np.exp(x)
        assert float(np.max(rel)) < 1e-5

    def test_log_space_evaluation_is_exact_for_log(self, F_log):
        x = np.array([-30.0, -5.0, -0.5, 0.0, 1.0, 40.0, 300.0])
        out = log_Phi(F_log, x)
        assert np.allclose(out, x, rtol=0, atol=3e-13 * (1 + np.abs(x).max()))

    def test_monotone_in_argument(self, F_half):
        x = np.linspace(-3.0, 20.0, 40)
        out = log_Phi(F_half, x)
        assert np.all(np.diff(out) >= -1e-10)

    def test_tangent_floor(self, F_half):
        # Phi(x) >= 1 + x always (take the unit test point y = 1)
        x = np.array([-0.9, -0.5, 0.3, 2.0])
        assert np.all(log_Phi(F_half, x) >= np.log1p(x) - 1e-12)

    def test_flattened_profile_transform_grows_faster_than_exp(self, F_half):
        # flattening the profile enlarges the transform
        x = np.array([1.0, 3.0, 10.0])
        assert np.all(log_Phi(F_half, x) >= x - 1e-9)


class TestAssumptionChecks:
    def test_log_passes_all(self, F_log):
        rep = check_assumptions(F_log)
        assert rep.all_pass()
        assert rep.delta > 0
        assert rep.y0 is not None
        assert rep.f_at_1 == pytest.approx(0.0, abs=1e-12)

    def test_flattened_passes_all(self, F_half):
        assert check_assumptions(F_half).all_pass()

    def test_convex_profile_fails_concavity(self):
        bad = EntropyFunction(fn=lambda y: y * y - 1.0)
        rep = check_assumptions(bad)
        assert not rep.a1
        assert not rep.all_pass()

    def test_shifted_profile_fails_normalization(self):
        shifted = EntropyFunction(fn=lambda y: np.log(y) + 0.5)
        assert not check_assumptions(shifted).a1


class TestGrowthMargin:
    @pytest.mark.parametrize("delta", [0.1, 0.25, 0.5])
    def test_log_profile_margin_nonnegative(self, F_log, delta):
        rep = lemma32_bound_check(F_log, delta)
        assert rep.status == "ok"
        assert rep.T == pytest.approx(1.0)
        assert rep.min_margin >= 0.0

    def test_flattened_profile_margin_nonnegative(self, F_half):
        rep = lemma32_bound_check(F_half, 0.25)
        assert rep.status == "ok" and rep.min_margin >= 0.0

    def test_delta_validation(self, F_log):
        with pytest.raises(ValueError):
            lemma32_bound_check(F_log, 0.6)
        with pytest.raises(ValueError):
            lemma32_bound_check(F_log, 0.0)

    def test_sweep_must_start_at_nonnegative_values(self, F_log):
        with pytest.raises(ValueError):
            lemma32_bound_check(F_log, 0.25, y_range=(0.5, 1e6))

    @settings(max_examples=40, deadline=None)
    @given(y=st.floats(1.0, 1e6), delta=st.floats(0.01, 0.5))
    def test_pointwise_bound_random_samples(self, y, delta):
        F = log_entropy()
        lp = float(log_Phi(F, np.array([delta * np.log(y)]))[0])
        assert lp <= 2.0 * delta * np.log(y) + 1e-9
