"""Downlink offloading to two servers: power split, rates, quadrature and decay."""
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate, optimize

from nomamec.chanstat import ChannelGainPair, OrderedPairConfig, order_stat_cdf, ordered_joint_pdf
from nomamec.downlink import (
    DEFAULT_QUAD_POINTS,
    DownlinkScaling,
    DownlinkTaskSpec,
    QuadratureSpec,
    cr_alpha_n_sq,
    cr_power_allocation,
    decay_exponent_fit,
    downlink_rates,
    feasible_strong_bound,
    oma_bits,
    p_d_latency_mc,
    p_d_tilde_quadrature,
    quadrature_doubling_delta,
    raw_region_constraint,
    simplified_region_constraint,
)
from nomamec.errors import ConfigurationError, DomainError, NumericError
from nomamec.mc_oracle import MonteCarloSpec, p_d_tilde_mc
from nomamec.uplink_latency import SnrOperatingPoint, p_n_exact

ONE_BIT = DownlinkTaskSpec(bits=1.0, slot=1.0)


def oma_margin(x, y, rho, bt, task):
    """OMA bits minus NOMA bits for server n, straight from the rate bookkeeping."""
    scaling = cr_power_allocation(rho, x, task, bt)
    _, slot1, slot2 = downlink_rates(rho, ChannelGainPair(x, y), scaling, task)
    return float(oma_bits(rho, y, task)) - (slot1 + slot2)


def integrated_p_d(cfg, rho, bt, task):
    """Adaptive 2-D integration of the OMA-wins region found by root-finding on bit counts."""
    eps = task.epsilon

    def inner(x):
        if oma_margin(x, x, rho, bt, task) < 0:
            return 0.0
        hi = x + 1.0
        while oma_margin(x, hi, rho, bt, task) >= 0 and hi < 1e3:
            hi *= 2
        top = optimize.brentq(lambda y: oma_margin(x, y, rho, bt, task), x, hi, xtol=1e-14) if hi < 1e3 else np.inf
        return integrate.quad(lambda y: ordered_joint_pdf(x, y, cfg), x, top, epsabs=1e-13)[0]

    lo = eps / rho
    mixed, _ = integrate.quad(inner, lo, 30.0, points=[eps / (bt * rho)], limit=400, epsabs=1e-11)
    return float(order_stat_cdf(lo, cfg.K, cfg.m)) + mixed


class TestTypes:
    def test_epsilon(self):
        assert DownlinkTaskSpec(bits=2.0, slot=1.0).epsilon == 3.0
        assert DownlinkTaskSpec(bits=1.0, slot=0.5).epsilon == 3.0
        with pytest.raises(ConfigurationError):
            DownlinkTaskSpec(bits=1.0, epsilon=2.0)
        with pytest.raises(ConfigurationError):
            DownlinkTaskSpec(bits=0.0)

    def test_scaling(self):
        s = DownlinkScaling.fixed(0.2, beta_tilde=0.5)
        assert (s.alpha_m_sq, s.alpha_n_sq, s.beta_tilde) == (0.8, 0.2, 0.5)
        with pytest.raises(ConfigurationError):
            DownlinkScaling(0.5, 0.5, 0.6)
        with pytest.raises(ConfigurationError):
            DownlinkScaling(1.0, 0.5, 0.5)

    def test_quadrature_spec(self):
        theta, _ = QuadratureSpec(4).nodes()
        assert np.allclose(np.sort(theta), np.sort(np.cos((2 * np.arange(1, 5) - 1) * np.pi / 8)))
        # the weighted rule integrates smooth functions on [-1, 1]
        theta, w = QuadratureSpec(64).nodes()
        assert np.sum(w * theta**2) == pytest.approx(2 / 3, rel=1e-3)
        assert np.sum(w * np.exp(theta)) == pytest.approx(math.e - 1 / math.e, rel=1e-3)
        assert QuadratureSpec().points == DEFAULT_QUAD_POINTS
        for bad in (0, 2.5, True):
            with pytest.raises(ConfigurationError):
                QuadratureSpec(bad)


class TestPowerAllocation:
    def test_starved(self):
        assert cr_power_allocation(10.0, 0.1, ONE_BIT).alpha_n_sq == 0.0
        assert cr_power_allocation(10.0, 0.05, ONE_BIT).alpha_n_sq == 0.0

    def test_twice_threshold(self):
        eps = ONE_BIT.epsilon
        s = cr_power_allocation(10.0, 2 * eps / 10.0, ONE_BIT)
        assert s.alpha_n_sq == pytest.approx(1 / (2 * (1 + eps)), rel=1e-12)

    def test_large_gain_limit(self):
        assert cr_power_allocation(1e12, 1.0, ONE_BIT).alpha_n_sq == pytest.approx(1 / (1 + ONE_BIT.epsilon), rel=1e-9)

    @given(st.floats(1e-2, 1e6), st.floats(0.01, 8), st.floats(0, 50), st.floats(0, 50))
    def test_bounds_and_monotone(self, rho, bits, g1, g2):
        task = DownlinkTaskSpec(bits)
        lo, hi = sorted((g1, g2))
        a_lo, a_hi = cr_alpha_n_sq(rho, lo, task.epsilon), cr_alpha_n_sq(rho, hi, task.epsilon)
        assert 0 <= a_lo <= a_hi < 1 / (1 + task.epsilon)

    def test_rejects(self):
        with pytest.raises(ConfigurationError):
            cr_power_allocation(0.0, 1.0, ONE_BIT)
        with pytest.raises(ConfigurationError):
            cr_power_allocation(1.0, -1.0, ONE_BIT)


class TestRates:
    def test_all_power_to_weak_server(self):
        g = ChannelGainPair(0.4, 1.5)
        bm, bn1, bn2 = downlink_rates(10.0, g, DownlinkScaling.fixed(0.0, 0.3), ONE_BIT)
        assert bm == pytest.approx(math.log2(1 + 10 * 0.4))
        assert bn1 == 0.0
        assert bn2 == pytest.approx(math.log2(1 + 3 * 1.5))

    def test_silent_second_slot(self):
        assert downlink_rates(10.0, ChannelGainPair(0.4, 1.5), DownlinkScaling.fixed(0.3), ONE_BIT)[2] == 0.0

    @given(st.floats(0.1, 1e5), st.floats(0.05, 6), st.floats(1.01, 100), st.floats(0, 10))
    def test_cr_meets_weak_server_exactly(self, rho, bits, excess, extra):
        task = DownlinkTaskSpec(bits)
        x = excess * task.epsilon / rho
        scaling = cr_power_allocation(rho, x, task)
        assert scaling.alpha_n_sq > 0
        bits_m, _, _ = downlink_rates(rho, ChannelGainPair(x, x + extra), scaling, task)
        assert bits_m == pytest.approx(bits, abs=1e-9)

    def test_array_inputs(self):
        w, s = np.array([0.1, 0.5]), np.array([0.2, 2.0])
        out = downlink_rates(10.0, (w, s), cr_power_allocation(10.0, w, ONE_BIT, 0.5), ONE_BIT)
        assert all(v.shape == (2,) for v in out)


class TestQuadrature:
    @pytest.mark.parametrize(
        "pair, rho, bt, expected",
        [((5, 2, 4), 100.0, 0.5, 0.0010591852399426263), ((5, 1, 2), 10.0, 0.2, 0.8355950848164924)],
    )
    def test_frozen_values(self, pair, rho, bt, expected):
        assert p_d_tilde_quadrature(OrderedPairConfig(*pair), rho, bt, ONE_BIT) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("pair", [(5, 1, 2), (5, 2, 4), (4, 1, 4)])
    @pytest.mark.parametrize("rho, bt", [(10.0, 0.2), (100.0, 0.5), (30.0, 0.8)])
    def test_integration_oracle(self, pair, rho, bt):
        cfg = OrderedPairConfig(*pair)
        assert p_d_tilde_quadrature(cfg, rho, bt, ONE_BIT) == pytest.approx(integrated_p_d(cfg, rho, bt, ONE_BIT), abs=1e-4)

    def test_monte_carlo_oracle(self):
        cfg = OrderedPairConfig(5, 2, 4)
        exact = p_d_tilde_quadrature(cfg, 100.0, 0.5, ONE_BIT)
        est = p_d_tilde_mc(cfg, 100.0, 0.5, ONE_BIT, MonteCarloSpec(10**7, seed=4))
        assert est.agrees_with(exact)

    def test_collapsed_interval(self):
        cfg, rho = OrderedPairConfig(5, 2, 4), 10.0
        val = p_d_tilde_quadrature(cfg, rho, 1 - 1e-9, ONE_BIT)
        assert val == pytest.approx(order_stat_cdf(ONE_BIT.epsilon / rho, 5, 2), abs=1e-8)

    @pytest.mark.parametrize("pair", [(5, 1, 2), (5, 2, 4)])
    @pytest.mark.parametrize("bt", [0.2, 0.5])
    def test_decay(self, pair, bt):
        cfg = OrderedPairConfig(*pair)
        curve = [(10 ** (d / 10), p_d_tilde_quadrature(cfg, 10 ** (d / 10), bt, ONE_BIT)) for d in np.arange(35, 55.1, 2.5)]
        assert decay_exponent_fit(curve, (35, 55)) == pytest.approx(cfg.m, abs=0.15)

    @pytest.mark.parametrize("pair", [(5, 1, 2), (5, 2, 4)])
    @pytest.mark.parametrize("bt", [0.2, 0.5])
    def test_doubling_is_stable(self, pair, bt):
        cfg = OrderedPairConfig(*pair)
        for d in range(10, 41, 5):
            assert quadrature_doubling_delta(cfg, 10 ** (d / 10), bt, ONE_BIT) < 1e-4

    @given(st.sampled_from([(5, 1, 2), (5, 2, 4), (3, 2, 3), (8, 3, 6)]), st.floats(-10, 60), st.floats(0.01, 0.99), st.floats(0.1, 6))
    @settings(max_examples=200, deadline=None)
    def test_is_probability(self, pair, rho_db, bt, bits):
        args = (OrderedPairConfig(*pair), 10 ** (rho_db / 10), bt, DownlinkTaskSpec(bits))
        try:
            val = p_d_tilde_quadrature(*args)
        except NumericError:
            # too coarse for a steep kernel; a finer rule must then succeed
            val = p_d_tilde_quadrature(*args, QuadratureSpec(16 * DEFAULT_QUAD_POINTS))
        assert 0.0 <= val <= 1.0

    @given(st.sampled_from([(5, 1, 2), (5, 2, 4)]), st.floats(10, 60), st.floats(0.2, 0.99), st.floats(0.1, 2))
    @settings(max_examples=100, deadline=None)
    def test_default_rule_on_grid_domain(self, pair, rho_db, bt, bits):
        val = p_d_tilde_quadrature(OrderedPairConfig(*pair), 10 ** (rho_db / 10), bt, DownlinkTaskSpec(bits))
        assert 0.0 <= val <= 1.0

    def test_coarse_rule_reports_itself(self):
        with pytest.raises(NumericError, match="QuadratureSpec.points"):
            p_d_tilde_quadrature(OrderedPairConfig(5, 1, 2), 1.0, 0.0625, DownlinkTaskSpec(0.5), QuadratureSpec(16))

    @pytest.mark.parametrize("bt", [0.0, 1.0, 1.5])
    def test_rejects_beta_tilde(self, bt):
        with pytest.raises(ConfigurationError):
            p_d_tilde_quadrature(OrderedPairConfig(5, 1, 2), 10.0, bt, ONE_BIT)


class TestRegionIdentity:
    @given(
        st.floats(0, 6), st.floats(0.01, 0.99), st.floats(0.05, 4), st.floats(-5, 3),
    )
    @settings(max_examples=500)
    def test_forms_agree_above_threshold(self, rho_exp, bt, bits, spread):
        rho, eps = 10**rho_exp, 2**bits - 1
        x = eps / rho * (1 + 10**spread)
        # on the boundary itself both sides are equal up to rounding
        assume(abs(x * bt * rho / eps - 1) > 1e-9)
        assert bool(raw_region_constraint(x, rho, bt, eps)) == bool(simplified_region_constraint(x, rho, bt, eps))

    def test_forms_differ_below_threshold(self):
        # for x < eps/rho the raw bound is negative, so only the simplified form holds
        rho, bt, eps = 10.0, 0.5, 1.0
        x = 0.5 * eps / rho
        assert feasible_strong_bound(x, rho, bt, eps) < 0
        assert not raw_region_constraint(x, rho, bt, eps)
        assert simplified_region_constraint(x, rho, bt, eps)

    def test_bound_matches_bit_comparison(self):
        rho, bt = 100.0, 0.5
        x = 0.015
        y_star = float(feasible_strong_bound(x, rho, bt, ONE_BIT.epsilon))
        assert oma_margin(x, y_star, rho, bt, ONE_BIT) == pytest.approx(0.0, abs=1e-9)


class TestDecayFit:
    def test_power_law(self):
        curve = [(r, r**-2.0) for r in 10 ** (np.arange(35, 56, 5) / 10)]
        assert decay_exponent_fit(curve, (35, 55)) == pytest.approx(2.0, abs=1e-10)

    def test_uplink_cross_check(self):
        cfg = OrderedPairConfig(5, 2, 4)
        curve = [(10 ** (d / 10), p_n_exact(cfg, SnrOperatingPoint.from_eta(10 ** (d / 10), 2.0))) for d in np.arange(35, 55.1, 2.5)]
        assert decay_exponent_fit(curve, (35, 55)) == pytest.approx(1.0, abs=0.1)

    def test_errors(self):
        with pytest.raises(DomainError):
            decay_exponent_fit([(10.0, 0.1), (100.0, 0.01)], (0, 30))
        with pytest.raises(DomainError):
            decay_exponent_fit([(10 ** (d / 10), 0.0) for d in (10, 20, 30, 40)], (0, 50))


class TestLatencyMonteCarlo:
    def test_no_power_no_bits(self):
        _, n = p_d_latency_mc(OrderedPairConfig(5, 2, 4), 10.0, DownlinkScaling.fixed(0.0), (1.0, 1.0), 10**4)
        assert n.value == 0.0

    def test_empty_task(self):
        m, _ = p_d_latency_mc(OrderedPairConfig(5, 2, 4), 10.0, DownlinkScaling.fixed(0.2), (0.0, 1.0), 10**4)
        assert m.value == 1.0

    def test_disjoint_seeds_agree(self):
        cfg, scaling = OrderedPairConfig(5, 2, 4), DownlinkScaling.fixed(0.2)
        a = p_d_latency_mc(cfg, 10.0, scaling, (1.0, 1.0), 10**6, seed=1)
        b = p_d_latency_mc(cfg, 10.0, scaling, (1.0, 1.0), 10**6, seed=2)
        for ea, eb in zip(a, b):
            assert abs(ea.value - eb.value) <= 4 * math.hypot(ea.stderr, eb.stderr)

    def test_rejects(self):
        with pytest.raises(ConfigurationError):
            p_d_latency_mc(OrderedPairConfig(5, 2, 4), 10.0, DownlinkScaling.fixed(0.2), (-1.0, 1.0), 10)
