"""Communications side: SINRs, achievable rates, sum rate, and Jain fairness.

The weak user's signal is decoded under interference from the strong
user's signal; the strong user first decodes and strips the weak user's
signal (SIC), so its own rate is interference-free while the strippable
rate of s2 at user 1 can bind instead.  The radar waveform is known at
both terminals and already removed, so it never appears as interference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError
from .scenario import PowerAllocation, ScenarioConfig


@dataclass(frozen=True)
class RateReport:
    """Rate bounds for one scenario and power split, bits/s/Hz."""

    gamma1: float             # SINR of s1 at user 1 (after SIC)
    gamma2: float             # SINR of s2 at user 2
    gamma2_bar: float         # SINR of s2 during SIC at user 1
    r1: float                 # rate bound of user 1
    r2: float                 # rate bound of user 2 (min of both branches)
    r_sum: float              # r1 + r2
    r2_limited_by_sic: bool   # True when the gamma2_bar branch binds


def compute_sinr(cfg: ScenarioConfig,
                 alloc: PowerAllocation) -> tuple[float, float, float]:
    """Return (gamma1, gamma2, gamma2_bar) for the given power split.

    gamma1 is interference-free (s2 already stripped, radar known);
    gamma2 sees s1 as interference at the weak user's receiver;
    gamma2_bar is the SINR of s2 while user 1 decodes it for stripping,
    taking user 1's own noise floor.
    """
    p = cfg.total_power_mw
    gamma1 = alloc.a1_sq * cfg.h1_gain * p / cfg.sigma1_sq
    gamma2 = (alloc.a2_sq * cfg.h2_gain * p
              / (cfg.h2_gain * alloc.a1_sq * p + cfg.sigma2_sq))
    gamma2_bar = (alloc.a2_sq * cfg.h1_gain * p
                  / (cfg.h1_gain * alloc.a1_sq * p + cfg.sigma1_sq))
    return gamma1, gamma2, gamma2_bar


def rate_report(cfg: ScenarioConfig, alloc: PowerAllocation) -> RateReport:
    """Evaluate the rate bounds of both users for one power split."""
    gamma1, gamma2, gamma2_bar = compute_sinr(cfg, alloc)
    r1 = math.log2(1.0 + gamma1)
    r2_own = math.log2(1.0 + gamma2)
    r2_sic = math.log2(1.0 + gamma2_bar)
    limited = r2_sic < r2_own
    r2 = r2_sic if limited else r2_own
    return RateReport(
        gamma1=gamma1,
        gamma2=gamma2,
        gamma2_bar=gamma2_bar,
        r1=r1,
        r2=r2,
        r_sum=r1 + r2,
        r2_limited_by_sic=limited,
    )


def jain_fairness(rates: Sequence[float]) -> float:
    """Normalized Jain index (sum x)^2 / (n sum x^2), in (0, 1].

    1 means perfectly even rates; 1/n means one user takes everything.
    """
    if len(rates) < 1:
        raise ValidationError("fairness needs at least one rate")
    if any(not (math.isfinite(r) and r >= 0.0) for r in rates):
        raise ValidationError(f"rates must be finite and >= 0, got {list(rates)!r}")
    sum_sq = sum(r * r for r in rates)
    if sum_sq == 0.0:
        raise ValidationError("fairness undefined: all rates are zero")
    total = sum(rates)
    return total * total / (len(rates) * sum_sq)


def f1_derivative(cfg: ScenarioConfig, alloc: PowerAllocation) -> float:
    """Slope of (1 + gamma1)(1 + gamma2) in a2_sq along a1_sq + a2_sq = kappa.

    The allocation must lie on the constraint line a1_sq + a2_sq = 1 - ar_sq.
    A strictly negative value means shifting power from the strong to the
    weak user can only cost sum rate, which is what pins the optimum to
    the weak user's QoS equality.
    """
    kappa = 1.0 - alloc.ar_sq
    if abs(alloc.a1_sq + alloc.a2_sq - kappa) > 1e-12 * max(1.0, kappa):
        raise ValidationError(
            "allocation is off the constraint line: a1_sq + a2_sq = "
            f"{alloc.a1_sq + alloc.a2_sq:.12g} but 1 - ar_sq = {kappa:.12g}")
    h1, h2 = cfg.h1_gain, cfg.h2_gain
    s1, s2 = cfg.sigma1_sq, cfg.sigma2_sq
    p = cfg.total_power_mw
    numerator = -(h1 * s2 - h2 * s1) * (h2 * kappa * p + s2) * p
    denominator = (h2 * (kappa - alloc.a2_sq) * p + s2) ** 2 * s1
    return numerator / denominator
