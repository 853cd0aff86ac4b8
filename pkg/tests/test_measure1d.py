"""Tabulated one-dimensional measures and their isoperimetric profiles."""

import numpy as np
import pytest

from isocert.entropy import log_entropy
from isocert.measure1d import (
    I_F_profile,
    SampledFunction,
    bobkov_bound_check,
    bobkov_goetze,
    build_measure,
    builtin_measure,
    cheeger_constant,
    fitted_profile_lower_bound,
    kolmogorov_distance,
    lemma41_ratio,
    rearrange,
    tilde_profile,
)
from isocert.tester import TestFamily

SQRT_2PI = 2.5066282746310002


class TestConstruction:
    def test_gaussian_normalizer(self, gauss):
        assert gauss.Z == pytest.approx(SQRT_2PI, rel=1e-6)

    def test_node_masses_sum_to_one(self, gauss, exp_measure, loglog):
        for mu in (gauss, exp_measure, loglog):
            assert float(np.sum(mu.node_mass)) == pytest.approx(1.0, abs=1e-12)

    def test_gaussian_density_and_median(self, gauss):
        assert gauss.density_at(0.0) == pytest.approx(1.0 / SQRT_2PI, rel=1e-6)
        assert gauss.median == pytest.approx(0.0, abs=1e-12)

    def test_gaussian_quantiles_match_reference(self, gauss):
        # reference values from the standard normal inverse CDF
        want = {0.1: -1.2815515655446004, 0.25: -0.67448975019608171,
                0.75: 0.67448975019608171, 0.9: 1.2815515655446004}
        for p, q in want.items():
            assert gauss.quantile(p) == pytest.approx(q, abs=5e-6)

    def test_two_sided_exponential(self, exp_measure):
        assert exp_measure.Z == pytest.approx(2.0, rel=1e-6)
        assert exp_measure.quantile(0.25) == pytest.approx(np.log(0.5), abs=1e-6)

    def test_squared_potential_normalizer(self):
        mu = build_measure(lambda x: x * x, name="halfwidth-gauss")
        assert mu.Z == pytest.approx(np.sqrt(np.pi), rel=1e-6)

    def test_potential_expression_matches_builtin(self, gauss):
        mu = build_measure(lambda x: 0.5 * x * x)
        assert mu.density_at(1.3) == pytest.approx(gauss.density_at(1.3), rel=1e-9)

    def test_cdf_tail_complement(self, gauss):
        x = np.array([-2.0, 0.0, 1.5])
        assert np.allclose(gauss.cdf_at(x) + gauss.tail_at(x), 1.0, atol=1e-10)

    def test_builtin_validation(self):
        with pytest.raises(ValueError):
            builtin_measure("nope")
        with pytest.raises(ValueError):
            builtin_measure("exp_power", alpha=2.5)
        with pytest.raises(ValueError):
            builtin_measure("gauss", n=16)

    def test_uniform_grid_kind(self, gauss_wide_uniform):
        g = gauss_wide_uniform
        assert g.n == 4001
        d = np.diff(g.grid)
        assert np.allclose(d, d[0], rtol=1e-9)
        assert float(np.sum(g.node_mass)) == pytest.approx(1.0, abs=1e-12)

    def test_polynomial_tail_is_refused(self):
        # (1 + x^2)^{-3/4} is not normalizable; no truncation is accepted
        with pytest.raises(ValueError):
            build_measure(lambda x: 0.75 * np.log1p(x * x))


class TestBallMasses:
    def test_zero_radius_keeps_full_outside_mass(self, gauss):
        assert gauss.mass_outside(0.0) == 1.0

    def test_outside_mass_decreases(self, gauss):
        r = np.linspace(0.0, 6.0, 50)
        m = gauss.mass_outside(r)
        assert np.all(np.diff(m) <= 1e-15)

    def test_two_sided_exponential_closed_form(self, exp_measure):
        r = np.array([0.5, 1.0, 2.0])
        assert np.allclose(exp_measure.mass_outside(r), np.exp(-r), rtol=1e-5)

    def test_radius_inverts_outside_mass(self, gauss):
        t = np.array([0.3, 0.1, 0.01])
        r = gauss.radius_of_outside_mass(t)
        assert np.allclose(gauss.mass_outside(r), t, rtol=1e-3)

    def test_negative_radius_rejected(self, gauss):
        with pytest.raises(ValueError):
            gauss.mass_outside(-0.5)


class TestHalfLineProfile:
    def test_gaussian_mid_value(self, gauss):
        prof = tilde_profile(gauss, np.array([0.5]))
        assert prof.tilde_I[0] == pytest.approx(1.0 / SQRT_2PI, rel=1e-6)

    def test_gaussian_tail_value_matches_reference(self, gauss):
        # density at the 0.1 quantile of the standard normal
        prof = tilde_profile(gauss, np.array([0.1]))
        assert prof.tilde_I[0] == pytest.approx(0.17549833193248685, rel=1e-5)

    def test_exponential_profile_is_linear(self, exp_measure):
        t = np.linspace(0.01, 0.5, 30)
        prof = tilde_profile(exp_measure, t)
        assert np.allclose(prof.tilde_I, t, rtol=1e-4)

    def test_domain_validation(self, gauss):
        with pytest.raises(ValueError):
            tilde_profile(gauss, np.array([0.0]))
        with pytest.raises(ValueError):
            tilde_profile(gauss, np.array([0.6]))

    def test_quantile_pairs_bracket_the_mass(self, gauss):
        t = np.array([0.2, 0.05])
        prof = tilde_profile(gauss, t)
        assert np.allclose(prof.u_t, -prof.v_t, atol=1e-8)
        assert np.allclose(gauss.cdf_at(prof.u_t), t, atol=1e-9)


class TestCheeger:
    def test_gaussian_constant(self, gauss):
        assert cheeger_constant(gauss) == pytest.approx(np.sqrt(np.pi / 2.0), rel=1e-5)

    def test_exponential_constant(self, exp_measure):
        assert cheeger_constant(exp_measure) == pytest.approx(1.0, rel=1e-3)


class TestBallProfile:
    def test_zero_radius_value_vanishes(self, gauss, F_log):
        prof = I_F_profile(gauss, F_log, np.array([0.0]))
        assert prof.s_values[0] == 1.0
        assert prof.values[0] == 0.0
        assert not prof.zero_flag[0]

    def test_gaussian_values_by_hand(self, gauss, F_log):
        # s log(1/s) / tilde_I(min(s, 1-s)) with s the two-sided normal tail mass
        prof = I_F_profile(gauss, F_log, np.array([1.0]))
        s = prof.s_values[0]
        want = s * np.log(1.0 / s) / tilde_profile(gauss, np.array([min(s, 1 - s)])).tilde_I[0]
        assert prof.values[0] == pytest.approx(want, rel=1e-12)
        assert prof.values[0] == pytest.approx(1.0221, rel=1e-3)

    def test_radii_past_support_flagged_zero(self, gauss, F_log):
        prof = I_F_profile(gauss, F_log, np.array([50.0]))
        assert prof.zero_flag[0]
        assert prof.values[0] == 0.0

    def test_profile_normalization_required(self, gauss):
        from isocert.entropy import EntropyFunction

        with pytest.raises(ValueError):
            I_F_profile(gauss, EntropyFunction(fn=lambda y: np.log(y) + 1.0), np.array([1.0]))


class TestTailRatio:
    def test_exponential_ratio_is_one(self):
        mu = builtin_measure("exp_power", alpha=1.0)
        rep = lemma41_ratio(mu, r_range=(2.0, 10.0), n=300)
        good = rep.ratios[np.isfinite(rep.ratios)]
        assert np.allclose(good, 1.0, atol=1e-4)

    def test_window_sup_and_half_mass_radius(self, gauss):
        rep = lemma41_ratio(gauss)
        assert rep.R_half == pytest.approx(0.67448975, rel=1e-4)
        assert rep.window_sup(3.0, 5.0) <= rep.sup + 1e-15

    def test_requires_log_concave(self, gauss):
        import dataclasses

        bumpy = dataclasses.replace(gauss, log_concave=False)
        with pytest.raises(ValueError):
            lemma41_ratio(bumpy)


class TestHalfLineBound:
    def test_gaussian_margins_positive(self, gauss):
        rep = bobkov_bound_check(gauss, np.linspace(0.01, 0.5, 50))
        assert rep.min_margin >= -1e-8

    def test_exponential_margins_positive(self, exp_measure):
        rep = bobkov_bound_check(exp_measure, np.linspace(0.01, 0.5, 50))
        assert rep.min_margin >= -1e-8

    def test_rejects_bad_domain(self, gauss):
        with pytest.raises(ValueError):
            bobkov_bound_check(gauss, np.array([0.7]))


class TestRearrangement:
    def test_law_is_preserved_within_one_cell(self, gauss):
        fam = TestFamily("random_smooth", tuple(range(5)), seed=0)
        cell = float(np.max(gauss.node_mass))
        for sf in fam.members(gauss):
            d = kolmogorov_distance(gauss, sf, rearrange(gauss, sf))
            assert d <= cell

    def test_result_increases_in_radius(self, gauss):
        sf = TestFamily("random_smooth", (3,), seed=0).members(gauss)[0]
        rf = rearrange(gauss, sf)
        right = gauss.grid >= 0
        assert np.all(np.diff(rf.values[right]) >= -1e-12)
        left = gauss.grid <= 0
        assert np.all(np.diff(rf.values[left]) <= 1e-12)

    def test_monotone_radial_input_is_fixed_point(self, gauss):
        vals = np.abs(gauss.grid)
        rf = rearrange(gauss, vals)
        assert kolmogorov_distance(gauss, vals, rf) <= float(np.max(gauss.node_mass))

    def test_negative_values_rejected(self, gauss):
        with pytest.raises(ValueError):
            rearrange(gauss, gauss.grid)

    def test_distance_between_identical_functions_is_zero(self, gauss):
        sf = TestFamily("random_smooth", (0,), seed=0).members(gauss)[0]
        assert kolmogorov_distance(gauss, sf, sf) == 0.0


class TestSampledFunction:
    def test_derivative_cross_check_flags_wrong_slope(self, gauss):
        sf = SampledFunction.from_callable(
            gauss, lambda x: np.exp(0.5 * x), dfn=lambda x: 2.0 * np.exp(0.5 * x)
        )
        assert sf.deriv_consistent is False
        good = SampledFunction.from_callable(
            gauss, lambda x: np.exp(0.5 * x), dfn=lambda x: 0.5 * np.exp(0.5 * x)
        )
        assert good.deriv_consistent is True

    def test_integrate_constant(self, gauss):
        one = np.ones_like(gauss.grid)
        assert gauss.integrate(one) == pytest.approx(1.0, abs=1e-12)


class TestProfileFit:
    def test_gaussian_lower_bound_constant_is_positive(self, gauss):
        t = np.geomspace(1e-8, 0.3, 400)
        prof = tilde_profile(gauss, t)
        rep = fitted_profile_lower_bound(prof, 2.0)
        assert rep.k > 0.5  # the true constant is about 0.7 at alpha = 2
        assert rep.exponent == pytest.approx(0.5)

    def test_alpha_validation(self, gauss):
        prof = tilde_profile(gauss, np.geomspace(1e-6, 0.3, 50))
        with pytest.raises(ValueError):
            fitted_profile_lower_bound(prof, 0.5)


class TestTwoSidedCriterion:
    def test_gaussian_both_sides_finite(self, gauss):
        rep = bobkov_goetze(gauss)
        assert rep.left_value is not None and np.isfinite(rep.left_value)
        assert rep.right_value is not None and np.isfinite(rep.right_value)
        # symmetric measure: the two sides agree
        assert rep.left_value == pytest.approx(rep.right_value, rel=1e-6)
