import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from mattertransport.model import (BacOutcome, DragModel, NoiseModel, ThrustProfile, bac_outcome,
                                   contact_coefficient, ripple_profile, desired_sequence,
                                   discretize, nominal_thrust, quantile_tau_u, sample_bac,
                                   sample_bacs)

# hump resembling a stance-phase thrust trace, deliberately irregular
TAB_TIMES = [0.0, 0.1, 0.25, 0.4, 0.55, 0.7, 0.9]
TAB_THRUST = [0.0, 0.8, 2.1, 2.4, 1.3, 0.6, 0.1]


def trapezoid_mean(times, thrust, tau):
    t = np.append(times, tau)
    f = np.append(thrust, thrust[0])
    area = sum(0.5 * (f[i] + f[i + 1]) * (t[i + 1] - t[i]) for i in range(len(t) - 1))
    return area / tau


class TestNominalThrust:
    def test_constant(self):
        assert nominal_thrust(ThrustProfile.constant(2.0, 1.0)) == 2.0

    def test_linear_ramp(self):
        # int_0^1 2t dt = 1
        assert nominal_thrust(ThrustProfile.linear_ramp(1.0, 1.0)) == pytest.approx(1.0, abs=1e-15)

    def test_tabulated_matches_trapezoid_oracle(self):
        prof = ThrustProfile.tabulated(TAB_TIMES, TAB_THRUST, 1.0)
        expected = trapezoid_mean(TAB_TIMES, TAB_THRUST, 1.0)
        assert abs(nominal_thrust(prof) - expected) < 1e-12

    def test_tabulated_matches_adaptive_quadrature(self):
        prof = ThrustProfile.tabulated(TAB_TIMES, TAB_THRUST, 2.0)
        val, _ = integrate.quad(lambda t: float(prof(t)), 0, 2.0, points=TAB_TIMES, limit=200)
        assert nominal_thrust(prof) == pytest.approx(val / 2.0, abs=1e-10)

    def test_tabulated_first_sample_after_zero(self):
        # closing segment runs from (0.75, 1) to (tau + 0.25, 3)
        prof = ThrustProfile.tabulated([0.25, 0.75], [3.0, 1.0], 1.0)
        val, _ = integrate.quad(lambda t: float(prof(t)), 0, 1, points=[0.25, 0.75])
        assert nominal_thrust(prof) == pytest.approx(val, abs=1e-12)
        assert nominal_thrust(prof) == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("kwargs", [
        dict(times=[], thrust=[]),
        dict(times=[0.0, 0.0], thrust=[1.0, 1.0]),
        dict(times=[0.0, 1.0], thrust=[1.0, 1.0]),
        dict(times=[0.5, 0.2], thrust=[1.0, 1.0]),
        dict(times=[0.0], thrust=[1.0, 2.0]),
    ])
    def test_invalid_tabulated(self, kwargs):
        with pytest.raises(ValueError):
            ThrustProfile.tabulated(tau=1.0, **kwargs)

    def test_invalid_tau(self):
        with pytest.raises(ValueError):
            ThrustProfile.constant(1.0, 0.0)


class TestIntegrate:
    def test_ramp_wraparound_closed_form(self):
        # int_0.75^1 2t + int_0^0.25 2t = 0.4375 + 0.0625
        prof = ThrustProfile.linear_ramp(1.0, 1.0)
        assert float(prof.integrate(0.75, 0.5)) == pytest.approx(0.5, abs=1e-14)

    @given(st.floats(0, 0.999), st.floats(0, 1))
    def test_tabulated_against_quad(self, start, frac):
        prof = ThrustProfile.tabulated(TAB_TIMES, TAB_THRUST, 1.0)
        length = frac
        pts = [t + k for k in (0, 1) for t in TAB_TIMES]
        val, _ = integrate.quad(lambda t: float(prof(t)), start, start + length,
                                points=[p for p in pts if start < p < start + length] or None,
                                limit=200)
        assert float(prof.integrate(start, length)) == pytest.approx(val, abs=1e-9)

    def test_full_period_from_any_start(self):
        prof = ThrustProfile.tabulated(TAB_TIMES, TAB_THRUST, 1.0)
        starts = np.linspace(0, 0.99, 50)
        np.testing.assert_allclose(prof.integrate(starts, 1.0), nominal_thrust(prof), atol=1e-12)

    def test_tiny_window_uses_local_value(self):
        prof = ThrustProfile.linear_ramp(1.0, 1.0)
        assert float(prof.integrate(0.5, 1e-15)) / 1e-15 == pytest.approx(1.0, rel=1e-6)


class TestQuantile:
    def test_below_atom(self):
        assert quantile_tau_u(NoiseModel(0.5), 0.25, 1.0) == 0.0

    def test_inverts_linear_part(self):
        assert quantile_tau_u(NoiseModel(0.5), 0.75, 1.0) == pytest.approx(0.5)

    def test_uniform_case(self):
        assert quantile_tau_u(NoiseModel(0.0), 0.3, 2.0) == pytest.approx(0.6)

    def test_full_loss(self):
        np.testing.assert_array_equal(quantile_tau_u(NoiseModel(1.0), [0.0, 0.5, 0.99], 1.0), 0.0)

    @given(st.floats(0, 0.99), st.floats(0, 0.9999))
    def test_cdf_roundtrip(self, b, u):
        noise = NoiseModel(b)
        x = float(quantile_tau_u(noise, u, 1.0))
        if u >= b:
            assert float(noise.cdf(x, 1.0)) == pytest.approx(u, abs=1e-12)
        else:
            assert x == 0.0

    def test_invalid_b(self):
        with pytest.raises(ValueError):
            NoiseModel(1.5)


class TestSampleBac:
    def test_noiseless(self):
        out = sample_bac(ThrustProfile.constant(1.0), NoiseModel(0.3, enabled=False),
                         np.random.default_rng(0))
        assert out == BacOutcome(0.0, 1.0, 1.0, 1.0)

    def test_total_loss(self):
        rng = np.random.default_rng(1)
        prof = ripple_profile()
        for _ in range(200):
            out = sample_bac(prof, NoiseModel(1.0), rng)
            assert out.tau_u == 0.0 and out.f_hat == 0.0 and out.f_u == 0.0

    def test_forced_ramp_outcome(self):
        out = bac_outcome(ThrustProfile.linear_ramp(1.0), 0.75, 0.5)
        assert out.f_u == pytest.approx(0.5, abs=1e-14)
        assert out.f_hat == pytest.approx(1.0, abs=1e-14)

    def test_deterministic_per_seed(self):
        prof = ripple_profile()
        a = sample_bac(prof, NoiseModel(0.4), np.random.default_rng(42))
        b = sample_bac(prof, NoiseModel(0.4), np.random.default_rng(42))
        assert a == b

    def test_vectorised_matches_scalar_stream(self):
        prof = ripple_profile()
        noise = NoiseModel(0.4)
        rng = np.random.default_rng(7)
        scalar = [sample_bac(prof, noise, rng) for _ in range(20)]
        c1, tau_u, f_u, f_hat = sample_bacs(prof, noise, 20, np.random.default_rng(7))
        np.testing.assert_array_equal(c1, [o.c1 for o in scalar])
        np.testing.assert_array_equal(tau_u, [o.tau_u for o in scalar])
        np.testing.assert_array_equal(f_hat, [o.f_hat for o in scalar])

    @given(st.integers(0, 2**32), st.floats(0, 0.95))
    @settings(max_examples=60)
    def test_outcome_invariants(self, seed, b):
        prof = ThrustProfile.tabulated([0.8 * t for t in TAB_TIMES], TAB_THRUST, 0.8)
        out = sample_bac(prof, NoiseModel(b), np.random.default_rng(seed))
        assert 0 <= out.c1 < 0.8
        assert 0 <= out.tau_u <= 0.8
        if out.tau_u == 0:
            assert out.f_hat == 0 and out.f_u == 0
        else:
            assert out.f_hat == pytest.approx(out.f_u / out.tau_u)

    def test_constant_thrust_unaffected_by_window(self):
        prof = ThrustProfile.constant(3.0, 0.5)
        _, tau_u, _, f_hat = sample_bacs(prof, NoiseModel(0.3), 5000, np.random.default_rng(3))
        hit = tau_u > 0
        np.testing.assert_allclose(f_hat[hit], 3.0, rtol=1e-12)

    def test_atom_mass(self):
        b, n = 0.3, 100_000
        _, tau_u, _, _ = sample_bacs(ripple_profile(), NoiseModel(b), n,
                                     np.random.default_rng(11))
        assert abs(np.mean(tau_u == 0) - b) < 3 * math.sqrt(b * (1 - b) / n)


class TestContactCoefficient:
    @pytest.mark.parametrize("c1,tau_u", [(0.1, 0.3), (0.8, 0.6), (0.0, 1.0), (0.5, 1e-3)])
    def test_normalised(self, c1, tau_u):
        out = bac_outcome(ThrustProfile.constant(1.0), c1, tau_u)
        edges = sorted({0.0, 1.0, c1, (c1 + tau_u) % 1.0})
        total = sum(integrate.quad(lambda t: float(contact_coefficient(out, t, 1.0)), a, b)[0]
                    for a, b in zip(edges[:-1], edges[1:]))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_weighted_thrust_equals_f_hat(self):
        prof = ThrustProfile.tabulated(TAB_TIMES, TAB_THRUST, 1.0)
        out = bac_outcome(prof, 0.6, 0.7)
        pts = sorted(set(TAB_TIMES) | {0.6, 0.3})
        val = integrate.quad(lambda t: float(contact_coefficient(out, t, 1.0) * prof(t)),
                             0, 1, points=pts, limit=200)[0]
        assert val == pytest.approx(out.f_hat, abs=1e-9)


class TestDiscretize:
    def test_noiseless(self):
        assert discretize(0.0, 1.0, 1.0, 4).flat.tolist() == [1, 1, 1, 1]

    def test_lost(self):
        assert discretize(0.3, 0.0, 1.0, 4).flat.tolist() == [0, 0, 0, 0]

    def test_interval_overlap(self):
        assert discretize(0.5, 0.25, 1.0, 4).flat.tolist() == [0, 0, 1, 0]

    def test_carryover_into_next_period(self):
        seq = discretize([[0.75], [0.0]], [[0.5], [0.0]], 1.0, 4)
        assert seq.bits.shape == (1, 2, 4)
        assert seq.bits[0].tolist() == [[0, 0, 0, 1], [1, 0, 0, 0]]

    def test_shape_and_desired(self):
        seq = discretize(np.zeros((3, 2)), np.ones((3, 2)), 1.0, 5)
        assert seq.flat.size == 2 * 3 * 5
        np.testing.assert_array_equal(seq.bits, desired_sequence(2, 3, 5).bits)

    def test_bad_resolution(self):
        with pytest.raises(ValueError):
            discretize(0.0, 1.0, 1.0, 0)


def test_drag_velocity():
    drag = DragModel(2.0)
    assert drag.open_loop_velocity(ThrustProfile.constant(3.0)) == 1.5
    with pytest.raises(ValueError):
        DragModel(0.0)
