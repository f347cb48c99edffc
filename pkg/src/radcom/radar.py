"""Radar side: closed-form waveform moments and delay-estimation error bounds.

The delay bound treats reflected communications components as interference
that carries no delay information, so the Fisher information comes from
the radar waveform alone and the result is a conservative bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InfiniteCrlbError, ValidationError
from .scenario import PowerAllocation, ScenarioConfig


class WaveformKind(Enum):
    """Supported frequency-modulation laws, both with rectangular envelope."""

    LINEAR_FM = "linear"
    PARABOLIC_FM = "parabolic"


@dataclass(frozen=True)
class WaveformSpec:
    """Analytic descriptor of one constant-modulus FM pulse."""

    kind: WaveformKind
    bandwidth_hz: float      # total frequency excursion W, Hz
    time_bandwidth: float    # TW product, dimensionless

    def __post_init__(self):
        if not isinstance(self.kind, WaveformKind):
            raise ValidationError(f"kind must be a WaveformKind, got {self.kind!r}")
        if not (math.isfinite(self.bandwidth_hz) and self.bandwidth_hz > 0.0):
            raise ValidationError(
                f"bandwidth_hz must be finite and > 0, got {self.bandwidth_hz!r}")
        if not (math.isfinite(self.time_bandwidth) and self.time_bandwidth >= 1.0):
            raise ValidationError(
                f"time_bandwidth must be >= 1, got {self.time_bandwidth!r}")

    @property
    def duration_s(self) -> float:
        """Pulse duration T = TW / W, seconds."""
        return self.time_bandwidth / self.bandwidth_hz


@dataclass(frozen=True)
class CrlbReport:
    """Delay-estimation error bounds for both targets, s^2."""

    crlb_per_target: tuple[float, float]   # per-target variance bounds
    sigma_eps_sq: float                    # total bound (sum over targets)
    sigma_eps_sq_normalized: float         # total bound / bound at ar_sq = 1


def analytic_energy(spec: WaveformSpec) -> float:
    """Pulse energy per unit transmit power: T/2 for a unit rectangular envelope."""
    return spec.duration_s / 2.0


def analytic_rms_bandwidth_sq(spec: WaveformSpec) -> float:
    """Squared rms bandwidth, rad^2/s^2 (4 pi^2 weighted second spectral moment).

    pi^2 W^2 / 3 for the linear sweep, 16 pi^2 W^2 / 45 for the parabolic
    sweep; the parabolic law spends more time near its frequency extremes,
    widening the moment by 16/15.
    """
    w_sq = (math.pi * spec.bandwidth_hz) ** 2
    if spec.kind is WaveformKind.LINEAR_FM:
        return w_sq / 3.0
    return 16.0 * w_sq / 45.0


def _effective_radar_noise(cfg: ScenarioConfig, include_si_residue: bool) -> float:
    """Radar noise power in mW, optionally inflated by self-interference residue."""
    noise = cfg.sigma_r_sq
    if include_si_residue:
        noise += cfg.total_power_mw * 10.0 ** (-cfg.si_suppression_db / 10.0)
    return noise


def crlb_delay(cfg: ScenarioConfig, alloc: PowerAllocation, spec: WaveformSpec,
               k: int, include_si_residue: bool = False) -> float:
    """Variance lower bound for the round-trip delay of target k (1 or 2), s^2.

    Scales as noise / (reflectivity * radar power * energy * bandwidth *
    rms-bandwidth^2); the two-way channel contributes the squared linear
    power gain of the target's link.
    """
    if k not in (1, 2):
        raise ValidationError(f"target index must be 1 or 2, got {k!r}")
    if alloc.ar_sq == 0.0:
        raise InfiniteCrlbError(
            "ar_sq = 0 gives zero Fisher information: the delay bound is infinite")
    eta = cfg.eta1 if k == 1 else cfg.eta2
    h_gain = cfg.h1_gain if k == 1 else cfg.h2_gain
    noise = _effective_radar_noise(cfg, include_si_residue)
    energy = analytic_energy(spec)
    brms_sq = analytic_rms_bandwidth_sq(spec)
    denom = (2.0 * eta ** 2 * h_gain ** 2 * alloc.ar_sq * cfg.total_power_mw
             * energy * spec.bandwidth_hz * brms_sq)
    return noise / denom


def total_estimation_variance(cfg: ScenarioConfig, alloc: PowerAllocation,
                              spec: WaveformSpec,
                              include_si_residue: bool = False) -> CrlbReport:
    """Sum of both targets' delay bounds, plus its all-power-to-radar normalization."""
    bounds = tuple(
        crlb_delay(cfg, alloc, spec, k, include_si_residue) for k in (1, 2))
    total = sum(bounds)
    reference_alloc = PowerAllocation(0.0, 0.0, 1.0)
    reference = sum(
        crlb_delay(cfg, reference_alloc, spec, k, include_si_residue) for k in (1, 2))
    return CrlbReport(
        crlb_per_target=bounds,
        sigma_eps_sq=total,
        sigma_eps_sq_normalized=total / reference,
    )
