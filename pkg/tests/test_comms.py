"""SINRs, rate bounds, fairness, and the sum-rate monotonicity diagnostic."""

import math
import warnings

import numpy as np
import pytest

from conftest import random_table_like_config
from radcom import (ModelAssumptionWarning, PowerAllocation, ScenarioConfig,
                    ValidationError, compute_sinr, f1_derivative, jain_fairness,
                    optimal_allocation_for_sumrate, rate_report)

CFG = ScenarioConfig()
# Sum-rate optimum for r02 = 1 at half the power on the radar.
OPT_HALF = optimal_allocation_for_sumrate(CFG, 1.0, 0.5)


def test_sinr_at_the_half_radar_optimum():
    gamma1, gamma2, gamma2_bar = compute_sinr(CFG, OPT_HALF)
    assert gamma1 == pytest.approx(2.9057, rel=1e-3)
    # the weak user's QoS of 1 bit/s/Hz pins its SINR to exactly 2^1 - 1
    assert gamma2 == pytest.approx(1.0, rel=1e-9)
    assert gamma2_bar == pytest.approx(3.3040, rel=1e-3)


def test_sinr_zero_power_degenerate_cases():
    no_s1 = PowerAllocation(0.0, 0.3, 0.5)
    gamma1, gamma2, _ = compute_sinr(CFG, no_s1)
    assert gamma1 == 0.0
    assert gamma2 == pytest.approx(
        0.3 * CFG.h2_gain * CFG.total_power_mw / CFG.sigma2_sq, rel=1e-12)

    no_s2 = PowerAllocation(0.3, 0.0, 0.5)
    _, gamma2, gamma2_bar = compute_sinr(CFG, no_s2)
    assert gamma2 == 0.0
    assert gamma2_bar == 0.0


def test_rate_report_at_the_half_radar_optimum():
    report = rate_report(CFG, OPT_HALF)
    assert report.r2 == pytest.approx(1.0, abs=1e-3)
    assert report.r1 == pytest.approx(1.9657, abs=1e-3)
    assert report.r_sum == pytest.approx(2.9657, abs=1e-3)
    assert report.r_sum == report.r1 + report.r2
    assert not report.r2_limited_by_sic


def test_rate_report_meets_both_qos_rates_at_the_power_minimum():
    # Allocation holding (r01, r02) = (1.5, 0.7) with equality.
    report = rate_report(CFG, PowerAllocation(0.05782, 0.23360, 0.70858))
    assert report.r1 == pytest.approx(1.5, abs=1e-4)
    assert report.r2 == pytest.approx(0.7, abs=1e-4)


def test_rate_report_zero_comm_power():
    report = rate_report(CFG, PowerAllocation(0.0, 0.0, 0.7))
    assert report.r_sum == 0.0


def test_sic_never_binds_for_table_like_configs():
    rng = np.random.default_rng(11)
    for _ in range(100):
        cfg = random_table_like_config(rng)
        u = rng.uniform(0.0, 1.0, size=3)
        u /= max(u.sum(), 1.0) * rng.uniform(1.0, 2.0)
        alloc = PowerAllocation(*u)
        _, gamma2, gamma2_bar = compute_sinr(cfg, alloc)
        assert gamma2_bar >= gamma2
        assert not rate_report(cfg, alloc).r2_limited_by_sic


def test_rates_invariant_to_joint_power_and_noise_rescaling():
    alloc = PowerAllocation(0.2, 0.5, 0.3)
    base = rate_report(CFG, alloc)
    for factor in (1e-3, 4.7, 1e3):
        scaled_cfg = ScenarioConfig(
            sigma1_sq=CFG.sigma1_sq * factor,
            sigma2_sq=CFG.sigma2_sq * factor,
            sigma_r_sq=CFG.sigma_r_sq * factor,
            total_power_mw=CFG.total_power_mw * factor,
        )
        scaled = rate_report(scaled_cfg, alloc)
        assert scaled.gamma1 == pytest.approx(base.gamma1, rel=1e-12)
        assert scaled.gamma2 == pytest.approx(base.gamma2, rel=1e-12)
        assert scaled.r_sum == pytest.approx(base.r_sum, rel=1e-12)


def test_jain_fairness_reference_values():
    assert jain_fairness([1.0, 1.0]) == 1.0
    assert jain_fairness([3.0, 1.0]) == pytest.approx(0.8, rel=1e-12)


def test_jain_fairness_at_the_no_radar_optimum():
    # Rates from the closed-form split for r02 = 0.7 as ar_sq -> 0.
    alloc = optimal_allocation_for_sumrate(CFG, 0.7, 0.0)
    report = rate_report(CFG, alloc)
    assert jain_fairness([report.r1, report.r2]) == pytest.approx(0.6678, abs=1e-3)


def test_jain_fairness_rejects_degenerate_inputs():
    with pytest.raises(ValidationError):
        jain_fairness([])
    with pytest.raises(ValidationError, match="all rates are zero"):
        jain_fairness([0.0, 0.0])
    with pytest.raises(ValidationError):
        jain_fairness([1.0, -0.5])


def test_jain_fairness_scale_invariance():
    rng = np.random.default_rng(3)
    for _ in range(100):
        rates = rng.uniform(0.0, 5.0, size=rng.integers(1, 6)).tolist()
        if sum(rates) == 0.0:
            continue
        c = 10.0 ** rng.uniform(-3, 3)
        assert jain_fairness([c * r for r in rates]) == pytest.approx(
            jain_fairness(rates), rel=1e-12)


def _f1(cfg, kappa, a2_sq):
    gamma1, gamma2, _ = compute_sinr(
        cfg, PowerAllocation(kappa - a2_sq, a2_sq, 1.0 - kappa))
    return (1.0 + gamma1) * (1.0 + gamma2)


def test_f1_derivative_negative_across_the_half_budget():
    for a2_sq in np.linspace(0.01, 0.49, 25):
        alloc = PowerAllocation(0.5 - a2_sq, a2_sq, 0.5)
        assert f1_derivative(CFG, alloc) < 0.0


def test_f1_derivative_vanishes_on_the_balance_line():
    # h1 * sigma2 == h2 * sigma1 makes the slope identically zero; the
    # power-of-two values keep the products exact in binary.
    with pytest.warns(ModelAssumptionWarning):
        cfg = ScenarioConfig(h1_gain=2.0 ** -30, h2_gain=2.0 ** -32,
                             sigma1_sq=2.0 ** -30, sigma2_sq=2.0 ** -32)
    assert f1_derivative(cfg, PowerAllocation(0.3, 0.2, 0.5)) == 0.0


@pytest.mark.parametrize("power", [1.0, 2.5])
def test_f1_derivative_matches_finite_difference(power):
    cfg = ScenarioConfig(total_power_mw=power)
    kappa = 0.5
    step = 1e-6
    for a2_sq in (0.1, 0.25, 0.4):
        analytic = f1_derivative(cfg, PowerAllocation(kappa - a2_sq, a2_sq, 0.5))
        numeric = (_f1(cfg, kappa, a2_sq + step)
                   - _f1(cfg, kappa, a2_sq - step)) / (2.0 * step)
        assert analytic == pytest.approx(numeric, rel=1e-6)


def test_f1_derivative_requires_the_constraint_line():
    with pytest.raises(ValidationError, match="constraint line"):
        f1_derivative(CFG, PowerAllocation(0.1, 0.1, 0.5))


def test_sum_rate_strictly_decreasing_in_weak_user_power():
    rng = np.random.default_rng(17)
    for _ in range(100):
        kappa = rng.uniform(0.05, 0.95)
        grid = np.sort(rng.uniform(1e-4, kappa - 1e-4, size=12))
        r_sums = [
            rate_report(CFG, PowerAllocation(kappa - a2, a2, 1.0 - kappa)).r_sum
            for a2 in grid
        ]
        assert all(a > b for a, b in zip(r_sums, r_sums[1:]))
