"""Closed-form power-split optimization and tradeoff-curve generation.

At a fixed radar share the sum rate is maximized by giving the weak user
exactly its QoS rate and the strong user everything left, which the
monotonicity of the rate product turns into a two-line closed form.  The
radar error bound in turn depends on the split only through the radar
share, so its constrained minimum sits at the QoS power minima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .comms import jain_fairness, rate_report
from .errors import InfeasibleError, ValidationError
from .radar import WaveformSpec, total_estimation_variance
from .scenario import PowerAllocation, QosRequirement, ScenarioConfig

DEFAULT_GRID_LO = 0.01
DEFAULT_GRID_HI = 0.99
DEFAULT_GRID_COUNT = 200


@dataclass(frozen=True)
class TradeoffPoint:
    """One sample of the rate versus estimation-error tradeoff."""

    alloc: PowerAllocation
    r_sum: float                     # bits/s/Hz
    r1: float
    r2: float
    sigma_eps_sq: float              # s^2; inf when ar_sq = 0
    sigma_eps_sq_normalized: float   # >= 1; inf when ar_sq = 0
    fairness: float                  # Jain index of (r1, r2)


@dataclass(frozen=True)
class SweepResult:
    """Tradeoff curve for one waveform and weak-user QoS level."""

    spec: WaveformSpec
    qos: QosRequirement
    points: tuple[TradeoffPoint, ...]          # ascending in ar_sq
    infeasible_tail_start: float | None        # ar_sq beyond which no split exists


def default_grid(lo: float = DEFAULT_GRID_LO, hi: float = DEFAULT_GRID_HI,
                 count: int = DEFAULT_GRID_COUNT) -> np.ndarray:
    """Uniform radar-share grid avoiding the degenerate corners 0 and 1."""
    if not (0.0 <= lo <= hi < 1.0):
        raise ValidationError(f"grid bounds must satisfy 0 <= lo <= hi < 1, "
                              f"got [{lo!r}, {hi!r}]")
    if count < 1:
        raise ValidationError(f"grid needs at least one point, got {count}")
    return np.linspace(lo, hi, count)


def optimal_allocation_for_sumrate(cfg: ScenarioConfig, r02: float,
                                   ar_sq: float) -> PowerAllocation:
    """Sum-rate-optimal split at a fixed radar share under the weak user's QoS.

    Puts the communications budget kappa = 1 - ar_sq entirely on the
    constraint line and sizes the weak user's share so its rate equals r02
    exactly; the remainder goes to the strong user.
    """
    if not (math.isfinite(ar_sq) and 0.0 <= ar_sq < 1.0):
        raise ValidationError(f"ar_sq must be in [0, 1), got {ar_sq!r}")
    if not (math.isfinite(r02) and r02 > 0.0):
        raise ValidationError(f"r02 must be > 0, got {r02!r}")
    kappa = 1.0 - ar_sq
    h2 = cfg.h2_gain
    noise2 = cfg.sigma2_sq / cfg.total_power_mw
    growth = 2.0 ** r02
    need = noise2 * (growth - 1.0)
    if kappa * h2 < need:
        kappa_min = need / h2
        raise InfeasibleError(
            f"QoS r02 = {r02:g} needs a communications budget of at least "
            f"kappa_min = {kappa_min:.6g}, but 1 - ar_sq = {kappa:.6g}",
            kappa_min=kappa_min)
    a1 = (kappa * h2 - need) / (h2 * growth)
    a1 = max(a1, 0.0)
    # Pair the two fractions so their sum reproduces kappa bitwise.
    a2 = kappa - a1
    if a1 < 0.5 * kappa:
        a1 = kappa - a2
    return PowerAllocation(a1_sq=a1, a2_sq=a2, ar_sq=ar_sq)


def min_power_for_qos(cfg: ScenarioConfig,
                      qos: QosRequirement) -> tuple[float, float]:
    """Smallest (a1_sq, a2_sq) meeting both users' QoS rates with equality."""
    noise1 = cfg.sigma1_sq / cfg.total_power_mw
    noise2 = cfg.sigma2_sq / cfg.total_power_mw
    a1_min = (2.0 ** qos.r01 - 1.0) * noise1 / cfg.h1_gain
    a2_min = (2.0 ** qos.r02 - 1.0) * (a1_min + noise2 / cfg.h2_gain)
    if a1_min + a2_min >= 1.0:
        raise InfeasibleError(
            f"QoS ({qos.r01:g}, {qos.r02:g}) needs communications power "
            f"{a1_min + a2_min:.6g} >= 1: nothing left for the radar waveform")
    return a1_min, a2_min


def max_radar_allocation(cfg: ScenarioConfig,
                         qos: QosRequirement) -> PowerAllocation:
    """Split giving the radar every watt the QoS constraints do not claim."""
    a1_min, a2_min = min_power_for_qos(cfg, qos)
    return PowerAllocation(
        a1_sq=a1_min,
        a2_sq=a2_min,
        ar_sq=1.0 - a1_min - a2_min,
    )


def _build_point(cfg: ScenarioConfig, alloc: PowerAllocation,
                 spec: WaveformSpec) -> TradeoffPoint:
    rates = rate_report(cfg, alloc)
    if alloc.ar_sq > 0.0:
        crlb = total_estimation_variance(cfg, alloc, spec)
        sigma_eps_sq = crlb.sigma_eps_sq
        normalized = crlb.sigma_eps_sq_normalized
    else:
        sigma_eps_sq = math.inf
        normalized = math.inf
    if rates.r1 > 0.0 or rates.r2 > 0.0:
        fairness = jain_fairness((rates.r1, rates.r2))
    else:
        fairness = math.nan
    return TradeoffPoint(
        alloc=alloc,
        r_sum=rates.r_sum,
        r1=rates.r1,
        r2=rates.r2,
        sigma_eps_sq=sigma_eps_sq,
        sigma_eps_sq_normalized=normalized,
        fairness=fairness,
    )


def star_point(cfg: ScenarioConfig, qos: QosRequirement,
               spec: WaveformSpec) -> TradeoffPoint:
    """Minimum-estimation-error point under both users' QoS constraints."""
    return _build_point(cfg, max_radar_allocation(cfg, qos), spec)


def tradeoff_sweep(cfg: ScenarioConfig, r02: float, spec: WaveformSpec,
                   grid: Sequence[float] | None = None) -> SweepResult:
    """Tradeoff curve over a radar-share grid at the weak user's QoS level.

    Grid values where the QoS cannot be met are dropped; the exact onset of
    infeasibility is recorded whenever the grid reaches it.  A grid value
    of 0 is kept but its estimation-error bound is flagged infinite.
    """
    grid_arr = default_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid_arr.ndim != 1 or len(grid_arr) == 0:
        raise ValidationError("grid must be a non-empty 1-D sequence")
    if np.any((grid_arr < 0.0) | (grid_arr >= 1.0)):
        raise ValidationError("grid values must lie in [0, 1)")
    if np.any(np.diff(grid_arr) <= 0.0):
        raise ValidationError("grid values must be strictly increasing")

    points = []
    kappa_min = None
    for ar_sq in grid_arr:
        try:
            alloc = optimal_allocation_for_sumrate(cfg, r02, float(ar_sq))
        except InfeasibleError as err:
            kappa_min = err.kappa_min
            break  # larger radar shares only shrink the budget further
        points.append(_build_point(cfg, alloc, spec))
    if not points:
        raise InfeasibleError(
            f"no grid point is feasible for r02 = {r02:g} "
            f"(kappa_min = {kappa_min:.6g})", kappa_min=kappa_min)
    tail = None if kappa_min is None else 1.0 - kappa_min
    return SweepResult(
        spec=spec,
        qos=QosRequirement(r01=0.0, r02=r02),
        points=tuple(points),
        infeasible_tail_start=tail,
    )


def sample_feasible_region(cfg: ScenarioConfig, spec: WaveformSpec, n: int,
                           seed: int) -> list[TradeoffPoint]:
    """n tradeoff points with splits drawn uniformly over the feasible simplex.

    Sorted-uniform spacings give exact uniformity over
    {a1_sq + a2_sq + ar_sq <= 1, all >= 0}; draws breaking the SIC power
    ordering a2_sq > a1_sq are rejected.  Deterministic for a given seed.
    """
    if n < 1:
        raise ValidationError(f"need n >= 1 samples, got {n}")
    rng = np.random.default_rng(seed)
    points: list[TradeoffPoint] = []
    while len(points) < n:
        u = np.sort(rng.random((max(2 * (n - len(points)), 64), 3)), axis=1)
        a1 = u[:, 0]
        a2 = u[:, 1] - u[:, 0]
        ar = u[:, 2] - u[:, 1]
        for i in np.nonzero(a2 > a1)[0]:
            points.append(_build_point(
                cfg, PowerAllocation(float(a1[i]), float(a2[i]), float(ar[i])), spec))
            if len(points) == n:
                break
    return points


def asymmetry_sweep(cfg: ScenarioConfig, r02: float, spec: WaveformSpec,
                    gaps_db: Sequence[float],
                    grid: Sequence[float] | None = None) -> list[SweepResult]:
    """Tradeoff curves as the weak user's channel drops gap dB below the strong one.

    The strong user's gain stays at the configured value, isolating how the
    channel asymmetry alone degrades the jointly achievable region.  Gaps
    must be strictly positive to preserve the strong/weak ordering.
    """
    if len(gaps_db) == 0:
        raise ValidationError("need at least one asymmetry gap")
    for gap in gaps_db:
        if not (math.isfinite(gap) and gap > 0.0):
            raise ValidationError(
                f"asymmetry gap must be > 0 dB to keep h1_gain > h2_gain, "
                f"got {gap!r}")
    results = []
    for gap in gaps_db:
        lowered = replace(cfg, h2_gain=cfg.h1_gain * 10.0 ** (-gap / 10.0))
        results.append(tradeoff_sweep(lowered, r02, spec, grid))
    return results
