"""Sampled pulses: discretized moments and the Monte Carlo delay harness."""

import math

import numpy as np
import pytest

from radcom import (InfeasibleError, MomentMethod, PowerAllocation,
                    SampledWaveform, ScenarioConfig, ValidationError,
                    WaveformKind, WaveformSpec, analytic_rms_bandwidth_sq,
                    instantaneous_frequency, mc_delay_estimation, numeric_energy,
                    numeric_msq_derivative, numeric_rms_bandwidth_sq,
                    post_integration_snr_db, synthesize, write_waveform_text)

W_HZ = 2e7
LINEAR = WaveformSpec(WaveformKind.LINEAR_FM, W_HZ, 1000.0)
PARABOLIC = WaveformSpec(WaveformKind.PARABOLIC_FM, W_HZ, 1000.0)
RADAR_ONLY = PowerAllocation(0.0, 0.0, 1.0)
# Radar noise lowered until the full-power echo sits at exactly 20 dB
# post-integration SNR, where the estimator is safely asymptotic.
BOOSTED = ScenarioConfig(sigma_r_sq=1e-19)
DELAY_S = 6.2832e-6


def test_synthesize_rejects_undersampling():
    with pytest.raises(ValidationError, match="undersampled"):
        synthesize(LINEAR, 7.9 * W_HZ)


@pytest.mark.parametrize("spec", [LINEAR, PARABOLIC])
def test_synthesize_shape_and_envelope(spec):
    sampled = synthesize(spec, 8 * W_HZ)
    assert len(sampled.samples) == round(8 * W_HZ * spec.duration_s)
    assert np.allclose(np.abs(sampled.samples), 1.0, rtol=0, atol=1e-12)


@pytest.mark.parametrize("spec", [LINEAR, PARABOLIC])
def test_frequency_law_has_zero_mean(spec):
    t = (np.arange(16000) + 0.5) * spec.duration_s / 16000
    mean_f = float(np.mean(instantaneous_frequency(spec, t)))
    assert abs(mean_f) < 1e-6 * W_HZ


def test_linear_law_sweeps_symmetric_endpoints():
    ends = instantaneous_frequency(LINEAR, np.array([0.0, LINEAR.duration_s]))
    assert ends[0] == -W_HZ / 2.0
    assert ends[1] == W_HZ / 2.0


def test_numeric_energy_is_half_duration():
    for spec in (LINEAR, PARABOLIC):
        sampled = synthesize(spec, 8 * W_HZ)
        assert numeric_energy(sampled) == pytest.approx(
            spec.duration_s / 2.0, rel=1e-9)


def test_numeric_energy_scales_quadratically_with_amplitude():
    sampled = synthesize(LINEAR, 8 * W_HZ)
    scaled = SampledWaveform(samples=3.0 * sampled.samples,
                             sample_rate_hz=sampled.sample_rate_hz,
                             duration_s=sampled.duration_s, spec=sampled.spec)
    assert numeric_energy(scaled) == pytest.approx(
        9.0 * numeric_energy(sampled), rel=1e-12)


def test_numeric_energy_linear_in_duration():
    short = synthesize(WaveformSpec(WaveformKind.LINEAR_FM, W_HZ, 100.0), 8 * W_HZ)
    long = synthesize(LINEAR, 8 * W_HZ)
    assert numeric_energy(long) == pytest.approx(10.0 * numeric_energy(short),
                                                 rel=1e-9)


@pytest.mark.parametrize("spec", [LINEAR, PARABOLIC])
def test_instfreq_moment_matches_closed_form(spec):
    sampled = synthesize(spec, 8 * W_HZ)
    numeric = numeric_rms_bandwidth_sq(sampled, MomentMethod.INST_FREQ)
    assert numeric == pytest.approx(analytic_rms_bandwidth_sq(spec), rel=1e-6)


@pytest.mark.parametrize("kind", [WaveformKind.LINEAR_FM,
                                  WaveformKind.PARABOLIC_FM])
def test_spectrum_moment_converges_with_time_bandwidth(kind):
    errors = {}
    for tw in (100.0, 1000.0):
        spec = WaveformSpec(kind, W_HZ, tw)
        sampled = synthesize(spec, 8 * W_HZ)
        numeric = numeric_rms_bandwidth_sq(sampled, MomentMethod.SPECTRUM)
        closed = analytic_rms_bandwidth_sq(spec)
        errors[tw] = abs(numeric - closed) / closed
    assert errors[1000.0] < 0.05
    assert errors[1000.0] < errors[100.0]


@pytest.mark.parametrize("spec", [LINEAR, PARABOLIC])
def test_derivative_energy_agrees_with_frequency_moment(spec):
    sampled = synthesize(spec, 16 * W_HZ)
    msq = numeric_msq_derivative(sampled)
    moment = numeric_rms_bandwidth_sq(sampled, MomentMethod.INST_FREQ)
    assert msq == pytest.approx(moment, rel=2e-2)


def test_derivative_of_a_constant_tone_is_zero():
    tone = SampledWaveform(samples=np.ones(4096, dtype=complex),
                           sample_rate_hz=8 * W_HZ,
                           duration_s=4096 / (8 * W_HZ), spec=LINEAR)
    assert numeric_msq_derivative(tone) == 0.0


def test_waveform_text_export(tmp_path):
    sampled = synthesize(WaveformSpec(WaveformKind.LINEAR_FM, W_HZ, 100.0), 8 * W_HZ)
    out = tmp_path / "pulse.txt"
    write_waveform_text(sampled, out)
    lines = out.read_text().splitlines()
    assert lines[0].startswith("#")
    assert "kind=linear" in lines[0] and "sample_rate_hz" in lines[0]
    assert len(lines) == 1 + len(sampled.samples)
    t0, re0, im0 = map(float, lines[1].split())
    assert t0 == pytest.approx(0.5 / sampled.sample_rate_hz, rel=1e-6)
    assert re0 ** 2 + im0 ** 2 == pytest.approx(1.0, abs=1e-8)


def test_post_integration_snr_reference():
    assert post_integration_snr_db(ScenarioConfig(), RADAR_ONLY, LINEAR, 1) \
        == pytest.approx(-60.0, abs=1e-9)
    assert post_integration_snr_db(BOOSTED, RADAR_ONLY, LINEAR, 1) \
        == pytest.approx(20.0, abs=1e-9)


def test_mc_guards():
    with pytest.raises(ValidationError, match="trials"):
        mc_delay_estimation(BOOSTED, RADAR_ONLY, LINEAR, 1, DELAY_S, 50, 0)
    with pytest.raises(ValidationError, match="ar_sq"):
        mc_delay_estimation(BOOSTED, PowerAllocation(0.5, 0.5, 0.0), LINEAR, 1,
                            DELAY_S, 200, 0)
    with pytest.raises(ValidationError, match="true_delay_s"):
        mc_delay_estimation(BOOSTED, RADAR_ONLY, LINEAR, 1, 1e-8, 200, 0)
    with pytest.raises(InfeasibleError, match="SNR"):
        mc_delay_estimation(ScenarioConfig(), RADAR_ONLY, LINEAR, 1,
                            DELAY_S, 200, 0)


def test_mc_is_deterministic_for_a_seed():
    a = mc_delay_estimation(BOOSTED, RADAR_ONLY, LINEAR, 1, DELAY_S, 150, 42)
    b = mc_delay_estimation(BOOSTED, RADAR_ONLY, LINEAR, 1, DELAY_S, 150, 42)
    assert a == b
    c = mc_delay_estimation(BOOSTED, RADAR_ONLY, LINEAR, 1, DELAY_S, 150, 43)
    assert c.empirical_var != a.empirical_var


def test_mc_noiseless_peak_is_sub_sample_accurate():
    quiet = ScenarioConfig(sigma_r_sq=1e-30)
    report = mc_delay_estimation(quiet, RADAR_ONLY, LINEAR, 1, DELAY_S, 100, 3)
    # interpolated peak lands within a quarter sample at 8x oversampling
    assert math.sqrt(report.empirical_var) < 1.0 / (32.0 * W_HZ)


def test_mc_efficiency_in_the_asymptotic_region():
    for seed in (1, 2, 3):
        report = mc_delay_estimation(BOOSTED, RADAR_ONLY, LINEAR, 1,
                                     DELAY_S, 300, seed)
        assert report.efficiency >= 0.8
        assert report.efficiency <= 3.0


def test_mc_parabolic_variance_tracks_the_closed_form_ratio():
    lin = mc_delay_estimation(BOOSTED, RADAR_ONLY, LINEAR, 1, DELAY_S, 1500, 7)
    par = mc_delay_estimation(BOOSTED, RADAR_ONLY, PARABOLIC, 1, DELAY_S, 1500, 7)
    assert par.crlb / lin.crlb == pytest.approx(15.0 / 16.0, rel=1e-12)
    assert 0.8 <= par.empirical_var / lin.empirical_var <= 1.1


def test_comm_interference_never_helps():
    # 30 dB so the interference is visible over the radar noise; paired
    # seeds keep the noise realizations identical across the two runs.
    cfg = ScenarioConfig(sigma_r_sq=1e-21)
    quiet = PowerAllocation(0.0, 0.0, 0.25)
    loud = PowerAllocation(0.2, 0.55, 0.25)
    for seed in range(10):
        without = mc_delay_estimation(cfg, quiet, LINEAR, 1, DELAY_S, 200, seed)
        with_comm = mc_delay_estimation(cfg, loud, LINEAR, 1, DELAY_S, 200, seed)
        assert with_comm.empirical_var >= without.empirical_var
