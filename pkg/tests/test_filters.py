import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from polycons.filters import (
    FilterError,
    QuadFilter,
    balanced_gain,
    brute_force_mu2,
    cap_filter,
    chebyshev_rate,
    design,
    factor_steps,
    memory_slot_rate,
    optimal_p2,
    p2_eval,
    robustness_caps,
    step_slem,
    step_stability,
)
from polycons.spectral import spectrum_from_values

mus = st.floats(0.01, 0.99)


@st.composite
def mu_sigma(draw):
    mu = draw(mus)
    sigma = draw(st.floats(0.0, 1.0)) * mu
    return mu, sigma


class TestOptimal:
    def test_examples(self):
        f = optimal_p2(0.9, 0.1)
        assert f.z_sq == pytest.approx(0.41)
        assert f.mu2 == pytest.approx(0.8 / 1.18)
        assert optimal_p2(0.6, 0.6).mu2 == 0.0
        g = optimal_p2(0.5, 0.0)
        assert g.mu2 == pytest.approx(0.25 / 1.75) and g.mu2 < 0.25

    def test_eval_examples(self):
        f = optimal_p2(0.9, 0.1)
        assert p2_eval(f, 0.9) == pytest.approx(f.mu2)
        assert p2_eval(f, 1.0) == pytest.approx(1.0)
        assert p2_eval(f, 0.0) == pytest.approx(-0.41 / 0.59)
        half = QuadFilter(0.5, 0.0, 0.8, 0.6)
        assert p2_eval(half, 0.0) == pytest.approx(-1.0)

    def test_errors(self):
        with pytest.raises(FilterError):
            optimal_p2(1.0, 0.1)
        with pytest.raises(FilterError):
            optimal_p2(0.5, 0.6)
        with pytest.raises(FilterError):
            p2_eval(QuadFilter(1.0, 0.0, 1.0, 1.0), 0.3)

    @settings(max_examples=200, deadline=None)
    @given(mu_sigma())
    def test_equioscillation(self, ms):
        mu, sigma = ms
        f = optimal_p2(mu, sigma)
        for lam in (mu, -mu):
            assert p2_eval(f, lam) == pytest.approx(f.mu2, rel=1e-12, abs=1e-15)
        for lam in (sigma, -sigma):
            assert -p2_eval(f, lam) == pytest.approx(f.mu2, rel=1e-12, abs=1e-15)
        assert f.mu2 <= mu * mu + 1e-15

    @settings(max_examples=100, deadline=None)
    @given(mu_sigma())
    def test_interior_bounded(self, ms):
        mu, sigma = ms
        f = optimal_p2(mu, sigma)
        grid = np.linspace(sigma, mu, 1000)
        assert np.all(np.abs(p2_eval(f, grid)) <= f.mu2 * (1 + 1e-12) + 1e-15)
        assert np.all(np.abs(p2_eval(f, -grid)) <= f.mu2 * (1 + 1e-12) + 1e-15)


class TestOracle:
    def test_symmetric_example(self):
        assert brute_force_mu2([-0.9, -0.1, 0.1, 0.3, 0.9]) == pytest.approx(0.8 / 1.18, abs=1e-5)

    def test_two_points(self):
        assert brute_force_mu2([0.4, -0.4]) == pytest.approx(0.0, abs=1e-9)

    def test_non_centered(self):
        lams = [0.8, 0.2, -0.1]
        expected = design(spectrum_from_values(lams)).mu2
        assert brute_force_mu2(lams) == pytest.approx(expected, abs=1e-5)
        # independent check of the affine reading: centered image (-1/3, 1/3, 1) ... computed by hand
        s = 0.35
        img = (np.array(lams) - s) / (1 - s)
        mu = img.max()
        sigma = np.abs(img).min()
        assert expected == pytest.approx((mu**2 - sigma**2) / (2 - mu**2 - sigma**2))

    @settings(max_examples=15, deadline=None)
    @given(st.lists(st.floats(-0.99, 0.99), min_size=2, max_size=8))
    def test_random_spectra(self, lams):
        assume(max(lams) - min(lams) > 1e-3)
        expected = design(spectrum_from_values(lams)).mu2
        assert brute_force_mu2(lams, grid_points=801) == pytest.approx(expected, abs=1e-5)


class TestSteps:
    def test_unit_keeps_consensus(self):
        pair = factor_steps(QuadFilter(0.04, 0.0, 0.5, 0.5), "unit")
        assert pair.a == 1.0 and pair.minus(1.0) == pytest.approx(1.0)

    def test_balanced_gain(self):
        assert balanced_gain(0.2) == pytest.approx(math.sqrt(0.8 / 1.2))
        assert balanced_gain(0.2) == pytest.approx(0.8165, abs=1e-4)

    @pytest.mark.parametrize("mode", ["unit", "balanced", 0.3, 2.5])
    def test_composition(self, mode):
        pair = factor_steps(QuadFilter(0.04, 0.0, 0.5, 0.5), mode)
        assert pair.compose(0.5) == pytest.approx(0.21875, abs=1e-15)
        assert pair.minus(1.0) == pytest.approx(pair.a)
        assert pair.plus(1.0) == pytest.approx(1.0 / pair.a)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.0, 0.95), st.floats(-1, 1), st.floats(0.05, 5.0))
    def test_a_invariance(self, z, lam, a):
        f = QuadFilter(z * z, 0.0, 0.5, 0.5)
        ref = factor_steps(f, "unit").compose(lam)
        for mode in ("balanced", a):
            assert factor_steps(f, mode).compose(lam) == pytest.approx(ref, abs=1e-12)
        assert ref == pytest.approx(p2_eval(f, lam), abs=1e-12)

    def test_matrix_maps(self, rng):
        x = rng.standard_normal((4, 4))
        p = x + x.T
        pair = factor_steps(QuadFilter(0.09, 0.0, 0.5, 0.5), "balanced")
        prod = pair.plus_matrix(p) @ pair.minus_matrix(p)
        expect = (p @ p - 0.09 * np.eye(4)) / 0.91
        assert np.allclose(prod, expect)

    def test_invalid_gain(self):
        with pytest.raises(FilterError):
            factor_steps(QuadFilter(0.04, 0.0, 0.5, 0.5), -1.0)


class TestStability:
    @pytest.mark.parametrize(
        "mu, z, cls",
        [(0.5, 0.2, "both_stable"), (0.7, 0.2, "stable_with_balanced_a"), (0.85, 0.2, "no_stable_split")],
    )
    def test_examples(self, mu, z, cls):
        assert step_stability(mu, z) == cls

    def test_step_slem_values(self):
        assert step_slem(0.5, 0.2, "unit") == pytest.approx(0.875)
        assert step_slem(0.7, 0.2, "unit") == pytest.approx(1.125)
        assert step_slem(0.7, 0.2, "balanced") == pytest.approx(0.9 / math.sqrt(0.96))
        assert step_slem(0.85, 0.2, "balanced") > 1

    @settings(max_examples=300, deadline=None)
    @given(st.floats(0.001, 0.499))
    def test_boundaries(self, z):
        eps = 1e-9
        assert step_stability(1 - 2 * z - eps, z) == "both_stable"
        assert step_stability(1 - 2 * z + eps, z) == "stable_with_balanced_a"
        assert step_stability(1 - z - eps, z) == "stable_with_balanced_a"
        assert step_stability(1 - z + eps, z) == "no_stable_split"

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0.0, 0.99), st.floats(0.0, 0.99))
    def test_unit_classification_matches_slem(self, mu, z):
        assume(abs(step_slem(mu, z, "unit") - 1) > 1e-9)
        assert (step_stability(mu, z) == "both_stable") == (step_slem(mu, z, "unit") < 1)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0.01, 0.99))
    def test_balanced_threshold_gap(self, z):
        # the exact balanced step contracts only below sqrt(1 - z^2) - z, which is
        # stricter than the 1 - z boundary used by the classification
        exact = math.sqrt(1 - z * z) - z
        assert exact < 1 - z
        if exact > 1e-6:
            assert step_slem(exact * (1 - 1e-6), z, "balanced") < 1
        gap = 0.5 * (max(exact, 0.0) + 1 - z)
        assert step_stability(gap, z) != "no_stable_split"
        assert step_slem(gap, z, "balanced") >= 1

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0.0, 0.99), st.floats(0.0, 0.99))
    def test_balanced_minimizes_worst_step(self, mu, z):
        bal = step_slem(mu, z, "balanced")
        for a in (0.5, 0.9, 1.0, 1.1, 2.0):
            assert bal <= step_slem(mu, z, a) + 1e-12


class TestCaps:
    def test_examples(self):
        caps = robustness_caps(0.5)
        assert caps.z_permanent == pytest.approx(0.70711, abs=1e-5)
        assert caps.z_resonant == pytest.approx(0.25)
        assert robustness_caps(0.999999).z_resonant < 1e-6

    def test_cap_z_sq_point_six(self):
        f = QuadFilter(0.6, 0.1, 0.9, 0.5)
        capped = cap_filter(f, robustness_caps(0.5).z_permanent)
        assert capped.capped and capped.z_sq == pytest.approx(0.5)

    def test_cap_value(self):
        f = optimal_p2(0.9, 0.8)
        assert f.z == pytest.approx(math.sqrt(0.725))
        capped = cap_filter(f, 1 / math.sqrt(2))
        assert capped.z_sq == pytest.approx(0.5)
        assert capped.mu2 == pytest.approx(0.62)

    def test_cap_identity(self):
        f = optimal_p2(0.3, 0.1)
        assert cap_filter(f, 0.35) is f
        assert cap_filter(f, 0.99) is f

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.0, 1 / math.sqrt(2)))
    def test_permanent_cap_bounds_unit_interval(self, z):
        f = QuadFilter(z * z, 0.0, 0.5, 0.5)
        grid = np.linspace(-1, 1, 4001)
        vals = np.abs(p2_eval(f, grid))
        assert vals.max() == pytest.approx(1.0, abs=1e-12)
        assert abs(p2_eval(f, 1.0)) == pytest.approx(1.0)
        assert abs(p2_eval(f, 0.0)) <= 1.0 + 1e-12

    @settings(max_examples=100, deadline=None)
    @given(mu_sigma())
    def test_capped_rate_definition(self, ms):
        mu, sigma = ms
        f = optimal_p2(mu, sigma)
        cap = 0.5 * (1 - mu)
        g = cap_filter(f, cap)
        assert g.z <= max(cap, f.z) + 1e-15
        if g.capped:
            assert g.mu2 == pytest.approx(max(abs(p2_eval(g, mu)), abs(p2_eval(g, sigma))))
            assert g.mu2 >= f.mu2 - 1e-12


class TestRates:
    def test_examples(self):
        assert chebyshev_rate(0.5, 2) == pytest.approx(7 ** -0.5)
        assert memory_slot_rate(0.5) == pytest.approx(2 - math.sqrt(3))
        assert chebyshev_rate(0.5, 200) - memory_slot_rate(0.5) < 1e-2

    def test_chebyshev_matches_recurrence(self):
        for mu in (0.3, 0.7, 0.95):
            x = 1 / mu
            t_prev, t_cur = 1.0, x
            for t in range(1, 30):
                assert chebyshev_rate(mu, t) == pytest.approx(t_cur ** (-1 / t), rel=1e-12)
                t_prev, t_cur = t_cur, 2 * x * t_cur - t_prev

    def test_large_t_no_overflow(self):
        assert math.isfinite(chebyshev_rate(0.01, 10_000))

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0.01, 0.99), st.integers(1, 60))
    def test_chebyshev_dominates_memory_slot(self, mu, t):
        assert chebyshev_rate(mu, t) >= memory_slot_rate(mu) - 1e-12

    def test_errors(self):
        with pytest.raises(FilterError):
            chebyshev_rate(1.0, 3)
        with pytest.raises(FilterError):
            memory_slot_rate(0.0)
