"""Experiment configuration: unit conversion, scenario files, allocation checks.

All stored quantities are linear: channel gains are dimensionless power
ratios, noise and transmit powers are in mW. dB/dBm forms are accepted at
the parsing boundary and re-emitted only in reports.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields

from .errors import ScenarioParseError, ValidationError


class ModelAssumptionWarning(UserWarning):
    """A configuration is legal but strains a modeling assumption."""


def db_to_linear(value_db: float) -> float:
    """Convert a dB (or dBm) value to its linear ratio (or mW power)."""
    if not math.isfinite(value_db):
        raise ValidationError(f"dB value must be finite, got {value_db!r}")
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a positive linear ratio (or mW power) to dB (or dBm)."""
    if not (math.isfinite(value) and value > 0.0):
        raise ValidationError(f"linear value must be finite and > 0, got {value!r}")
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class ScenarioConfig:
    """Physical parameters of one experiment.

    Defaults are the baseline simulation setup: a strong user at -90 dB
    gain, a weak user 10 dB below it, -105 dBm receiver noise, -110 dBm
    radar noise, a 20 MHz sweep with time-bandwidth product 1000, and
    0 dBm total emission.
    """

    h1_gain: float = 1e-9            # |h1|^2, user-1 linear power gain
    h2_gain: float = 1e-10           # |h2|^2, user-2 linear power gain
    sigma1_sq: float = 10.0 ** -10.5  # user-1 noise power, mW (-105 dBm)
    sigma2_sq: float = 10.0 ** -10.5  # user-2 noise power, mW (-105 dBm)
    sigma_r_sq: float = 1e-11        # radar receiver noise power, mW (-110 dBm)
    eta1: float = 0.1                # user-1 radar cross-section, m^2
    eta2: float = 0.5                # user-2 radar cross-section, m^2
    bandwidth_hz: float = 2e7        # sweep bandwidth W, Hz
    time_bandwidth: float = 1000.0   # TW product, dimensionless
    total_power_mw: float = 1.0      # total transmit power P, mW (0 dBm)
    si_suppression_db: float = 110.0  # self-interference suppression, dB (metadata)

    def __post_init__(self):
        for name in ("sigma1_sq", "sigma2_sq", "sigma_r_sq", "eta1", "eta2",
                     "bandwidth_hz", "total_power_mw"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValidationError(f"{name} must be finite and > 0, got {value!r}")
        if not (math.isfinite(self.h1_gain) and math.isfinite(self.h2_gain)):
            raise ValidationError("channel gains must be finite")
        if not self.h1_gain > self.h2_gain > 0.0:
            raise ValidationError(
                "channel ordering violated: require h1_gain > h2_gain > 0 "
                f"(user 1 is the strong user), got h1_gain={self.h1_gain:.6g}, "
                f"h2_gain={self.h2_gain:.6g}")
        if not (math.isfinite(self.time_bandwidth) and self.time_bandwidth >= 1.0):
            raise ValidationError(
                f"time_bandwidth must be >= 1, got {self.time_bandwidth!r}")
        if not math.isfinite(self.si_suppression_db):
            raise ValidationError("si_suppression_db must be finite")
        if self.sigma1_sq > self.sigma2_sq:
            # Legal but outside the regime the closed-form analysis assumes.
            warnings.warn(
                "sigma1_sq > sigma2_sq: strong user is noisier than weak user; "
                "sum-rate monotonicity is no longer guaranteed",
                ModelAssumptionWarning, stacklevel=2)

    @property
    def duration_s(self) -> float:
        """Pulse duration T = TW / W, seconds."""
        return self.time_bandwidth / self.bandwidth_hz


@dataclass(frozen=True)
class PowerAllocation:
    """Fractions of total transmit power given to s1, s2 and the radar waveform.

    Construction only requires finite, non-negative values so that invalid
    splits can be represented and diagnosed; use :func:`validate_allocation`
    to check the feasibility constraints.
    """

    a1_sq: float  # power fraction of user-1 signal
    a2_sq: float  # power fraction of user-2 signal
    ar_sq: float  # power fraction of radar waveform

    def __post_init__(self):
        for name in ("a1_sq", "a2_sq", "ar_sq"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValidationError(
                    f"{name} must be finite and >= 0, got {value!r}")

    @property
    def power_sum(self) -> float:
        return self.a1_sq + self.a2_sq + self.ar_sq


@dataclass(frozen=True)
class QosRequirement:
    """Minimum spectral efficiencies guaranteed to each user, bits/s/Hz."""

    r01: float  # strong user minimum rate
    r02: float  # weak user minimum rate

    def __post_init__(self):
        for name in ("r01", "r02"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValidationError(f"{name} must be finite and >= 0, got {value!r}")


def validate_allocation(cfg: ScenarioConfig, alloc: PowerAllocation) -> list[str]:
    """Check an allocation against the power constraints.

    Returns the ordered list of violated constraints (empty when the split
    is feasible).  A split with a2_sq <= a1_sq is feasible but breaks the
    decoding order that lets the weak user's signal be stripped first, so
    it is flagged as a :class:`ModelAssumptionWarning` instead.
    """
    violations = []
    for name in ("a1_sq", "a2_sq", "ar_sq"):
        value = getattr(alloc, name)
        if not 0.0 <= value < 1.0:
            violations.append(f"{name} = {value:.6g} not in [0, 1)")
    if alloc.power_sum > 1.0:
        violations.append(f"power sum {alloc.power_sum:.6g} > 1")
    if alloc.a2_sq <= alloc.a1_sq:
        warnings.warn(
            f"a2_sq = {alloc.a2_sq:.6g} <= a1_sq = {alloc.a1_sq:.6g}: "
            "SIC decoding order broken (weak user must get more power)",
            ModelAssumptionWarning, stacklevel=2)
    return violations


# Scenario-file keys: logical field -> (linear key, dB/dBm key or None).
_FIELD_KEYS = {
    "h1_gain": ("h1_gain", "h1_gain_db"),
    "h2_gain": ("h2_gain", "h2_gain_db"),
    "sigma1_sq": ("sigma1_sq", "sigma1_sq_dbm"),
    "sigma2_sq": ("sigma2_sq", "sigma2_sq_dbm"),
    "sigma_r_sq": ("sigma_r_sq", "sigma_r_sq_dbm"),
    "eta1": ("eta1", None),
    "eta2": ("eta2", None),
    "bandwidth_hz": ("bandwidth_hz", None),
    "time_bandwidth": ("time_bandwidth", None),
    "total_power_mw": ("total_power_mw", "total_power_dbm"),
    "si_suppression_db": ("si_suppression_db", None),
}

_KEY_TO_FIELD = {}
for _field, (_lin, _db) in _FIELD_KEYS.items():
    _KEY_TO_FIELD[_lin] = (_field, False)
    if _db is not None:
        _KEY_TO_FIELD[_db] = (_field, True)


def load_scenario(source: str) -> ScenarioConfig:
    """Build a validated ScenarioConfig from flat ``key=value`` text.

    Lines may hold several comma-separated pairs; ``#`` starts a comment.
    Gains and powers are accepted either linear (``h1_gain``, ``sigma1_sq``)
    or logarithmic (``h1_gain_db``, ``sigma1_sq_dbm``); giving both forms of
    one field is rejected.  Missing fields take the baseline defaults.
    """
    assigned: dict[str, tuple[float, str]] = {}
    for line_no, raw_line in enumerate(source.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        for entry in line.split(","):
            entry = entry.strip()
            if not entry:
                continue
            key, sep, text = entry.partition("=")
            key = key.strip()
            text = text.strip()
            if not sep or not key or not text:
                raise ScenarioParseError(
                    f"expected key=value, got {entry!r}", line_no)
            if key not in _KEY_TO_FIELD:
                raise ScenarioParseError(f"unknown key {key!r}", line_no)
            try:
                value = float(text)
            except ValueError:
                raise ScenarioParseError(
                    f"value for {key!r} is not a number: {text!r}", line_no) from None
            field, is_db = _KEY_TO_FIELD[key]
            if field in assigned:
                raise ScenarioParseError(
                    f"{key!r} conflicts with earlier {assigned[field][1]!r} "
                    "(field given twice)", line_no)
            assigned[field] = (db_to_linear(value) if is_db else value, key)
    kwargs = {field: value for field, (value, _key) in assigned.items()}
    return ScenarioConfig(**kwargs)


def scenario_report_fields(cfg: ScenarioConfig) -> dict:
    """Serialize a config for reports: exact linear values plus dB/dBm views.

    The logarithmic entries are rounded to 6 significant digits and exist
    for human consumption; the linear entries round-trip exactly.
    """
    out: dict[str, float] = {}
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        out[f.name] = value
        db_key = _FIELD_KEYS[f.name][1]
        if db_key is not None and value > 0.0:
            out[db_key] = float(f"{linear_to_db(value):.6g}")
    return out
