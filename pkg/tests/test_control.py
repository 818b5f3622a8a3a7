import math

import numpy as np
import pytest

from dgsim.control import (
    Bounds,
    CuttingSpec,
    LawParams,
    guidance_accels,
    horizon_factor,
    law_example2,
    law_theta,
    sign0,
    switching_surface,
    theta_tau,
)


class TestSign0:
    def test_zero_tie_break(self):
        assert sign0(0.0) == 0.0

    def test_negative(self):
        assert sign0(-3.2) == -1.0

    def test_tiny_positive(self):
        assert sign0(1e-300) == 1.0

    def test_odd(self):
        for v in (-2.0, -1e-12, 0.0, 5.0):
            assert sign0(-v) == -sign0(v)


class TestThetaTau:
    def test_hand_value(self):
        spec = CuttingSpec(0.01)
        t = 0.003
        assert theta_tau(t, spec) == pytest.approx(0.007, abs=1e-15)

    def test_period_boundary_is_zero(self):
        spec = CuttingSpec(0.01)
        assert theta_tau(0.01, spec) == 0.0
        assert theta_tau(0.0, spec) == 0.0
        assert theta_tau(2 * 0.01, spec) == 0.0

    def test_periodic(self):
        spec = CuttingSpec(0.01)
        assert theta_tau(0.013, spec) == pytest.approx(theta_tau(0.003, spec),
                                                       abs=1e-12)
        rng = np.random.default_rng(3)
        for t in rng.uniform(0.0, 1.0, size=60):
            assert theta_tau(t + spec.tau, spec) == pytest.approx(
                theta_tau(float(t), spec), abs=1e-9)

    def test_range(self):
        spec = CuttingSpec(0.37)
        rng = np.random.default_rng(5)
        for t in rng.uniform(0.0, 100.0, size=200):
            th = theta_tau(float(t), spec)
            assert 0.0 <= th < spec.tau

    def test_decreasing_within_period(self):
        spec = CuttingSpec(1.0)
        ts = np.linspace(0.05, 0.95, 19)
        vals = [theta_tau(float(t), spec) for t in ts]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_tau_must_be_positive(self):
        with pytest.raises(ValueError):
            CuttingSpec(0.0)


class TestSwitchingSurface:
    def test_zero(self):
        assert switching_surface(0.0, 0.0, 5.0) == 0.0

    def test_zero_horizon(self):
        assert switching_surface(4.0, -100.0, 0.0) == 4.0

    def test_benchmark_start_value(self):
        # x1=300, x2=30 at t=0 with T=80, kappa=1: the exp term underflows
        # (exponent -3*1*900*80), so h = 80 and s = 300 + 80*30 = 2700
        rem = 80.0
        h = rem + math.exp(-3.0 * 1.0 * 30.0 ** 2 * rem)
        assert switching_surface(300.0, 30.0, h) == pytest.approx(2700.0)


class TestLawExample2:
    def test_zero_state_gives_zero(self):
        assert law_example2(1, 0.0, 0.0, 0.0, 80.0, 1.0, 400.0) == 0.0
        assert law_example2(2, 0.0, 0.0, 0.0, 80.0, 1.0, 400.0) == 0.0

    def test_benchmark_start(self):
        assert law_example2(1, 300.0, 30.0, 0.0, 80.0, 1.0, 400.0) == -400.0

    def test_players_oppose(self):
        # h = 77 + exp(-3*77) = 77, s = 10 - 77 = -67 < 0
        a1 = law_example2(1, 10.0, -1.0, 3.0, 80.0, 1.0, 400.0)
        a2 = law_example2(2, 10.0, -1.0, 3.0, 80.0, 1.0, 300.0)
        assert a1 == 400.0 and a2 == -300.0

    def test_odd_in_state(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            x1, x2 = rng.normal(scale=50.0, size=2)
            t = float(rng.uniform(0.0, 79.0))
            for player in (1, 2):
                plus = law_example2(player, x1, x2, t, 80.0, 1.0, 400.0)
                minus = law_example2(player, -x1, -x2, t, 80.0, 1.0, 400.0)
                assert minus == -plus

    def test_invalid_player(self):
        with pytest.raises(ValueError):
            law_example2(3, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0)


class TestLawTheta:
    def test_zero_beta_shares_surface(self):
        spec = CuttingSpec(0.01)
        for x1, x2, t in ((3.0, -5.0, 0.004), (-1.0, 2.0, 0.009)):
            a1 = law_theta(1, x1, x2, t, spec, 7.0, beta=0.0)
            a2 = law_theta(2, x1, x2, t, spec, 7.0)
            assert a1 == -a2

    def test_zero_horizon_reduces_to_position_sign(self):
        spec = CuttingSpec(0.01)
        # t = tau: theta = 0, so the surface is just x1
        assert law_theta(1, 1.0, -999.0, 0.01, spec, 5.0) == -5.0

    def test_hand_value_with_offset(self):
        spec = CuttingSpec(0.01)
        # t=0.003 -> theta=0.007; s = 0 + 0.007*(10+5) = 0.105 > 0
        assert law_theta(1, 0.0, 10.0, 0.003, spec, 4.0, beta=5.0) == -4.0

    def test_odd_with_zero_beta(self):
        spec = CuttingSpec(0.2)
        rng = np.random.default_rng(13)
        for _ in range(25):
            x1, x2 = rng.normal(scale=10.0, size=2)
            t = float(rng.uniform(0.0, 3.0))
            for player in (1, 2):
                plus = law_theta(player, x1, x2, t, spec, 2.5)
                minus = law_theta(player, -x1, -x2, t, spec, 2.5)
                assert minus == -plus


class TestGuidanceAccels:
    def _params(self, rho_r=20.0, rho_n=20.0, k1=0.0, k2=0.0, horizon=None):
        return LawParams(
            rho_r=Bounds(rho_r),
            rho_n=Bounds(rho_n),
            horizon=CuttingSpec(0.01) if horizon is None else horizon,
            kappa1=k1,
            kappa2=k2,
        )

    def test_radial_hand_value(self):
        # theta(0) = 0; sign(200) = +1; cubic: 1e-3 * 10^3 = 1
        p = self._params(k1=1e-3)
        a_r, a_n = guidance_accels((200.0, 10.0, 0.0, 0.0), 0.0, p)
        assert a_r == pytest.approx(-21.0)
        assert a_n == 0.0

    def test_zero_measured_state(self):
        p = self._params(k1=1e-3, k2=1e-3)
        assert guidance_accels((0.0, 0.0, 0.0, 0.0), 0.123, p) == (0.0, 0.0)

    def test_negative_surface_gives_plus_rho(self):
        p = self._params()
        _, a_n = guidance_accels((100.0, 0.0, -5.0, 0.0), 0.004, p)
        assert a_n == 20.0

    def test_sign_component_bounded(self):
        rng = np.random.default_rng(17)
        p = self._params(rho_r=20.0, rho_n=15.0)
        for _ in range(50):
            meas = tuple(rng.normal(scale=100.0, size=4))
            t = float(rng.uniform(0.0, 5.0))
            a_r, a_n = guidance_accels(meas, t, p)
            assert a_r in (-20.0, 0.0, 20.0)
            assert a_n in (-15.0, 0.0, 15.0)

    def test_fixed_horizon_variant(self):
        p = self._params(horizon=10.0)
        # h = 10 - 2 = 8; surface 1 + 8 * (-0.2) = -0.6 < 0
        a_r, _ = guidance_accels((1.0, -0.2, 0.0, 0.0), 2.0, p)
        assert a_r == 20.0
        assert horizon_factor(10.0, 12.0) == 0.0

    def test_cubic_term_unbounded_by_rho(self):
        p = self._params(k2=1e-3)
        _, a_n = guidance_accels((0.0, 0.0, 60.0, 40.0), 0.0, p)
        assert a_n == pytest.approx(-20.0 - 64.0)

    def test_negative_gains_rejected(self):
        with pytest.raises(ValueError):
            self._params(k1=-1.0)
        with pytest.raises(ValueError):
            Bounds(-5.0)
