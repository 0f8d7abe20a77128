import time

import numpy as np
import pytest

from friction_uas.errors import NoConvergenceError, NonFiniteStateError, SeriesConvergenceError
from friction_uas.report import ParameterTrace
from friction_uas.sim.simulation import SimConfig, measure, simulate
from friction_uas.uas import identification
from friction_uas.uas.identification import (PARAMETER_TRACE_HEADER, crossing_index,
                                              end_of_motion_index, extract_estimates, identify,
                                              write_parameter_trace_csv)
from friction_uas.uas.nussbaum import NussbaumSpec
from friction_uas.uas.observer import AdaptationConfig, initial_observer_state

from .conftest import make_trajectory


def _identify(physical, spec, measured, z0, **overrides):
    cfg = AdaptationConfig.from_table(**overrides)
    init = initial_observer_state(measured, cfg, seed=0, z0=z0)
    return identify(measured, physical, cfg, spec, init), cfg


def test_infinite_threshold_returns_initial_guess(physical, spec, short_run, initial_guess):
    report, _ = _identify(physical, spec, short_run, initial_guess, threshold=float("inf"))
    assert report.converged
    assert report.crossing_time == 0.0
    assert np.array_equal(report.estimates, initial_guess)
    assert report.method == "uas"
    assert report.wall_time > 0.0


def test_short_run_invariants(physical, spec, short_run, initial_guess, adaptation):
    noisy = measure(short_run, SimConfig(noise_sigma=1e-3, noise_enabled=True, seed=2))
    report, cfg = _identify(physical, spec, noisy, initial_guess)
    trace = report.trace
    assert trace.z_hat.shape == (len(noisy), 10)
    assert trace.k[0] == cfg.k0
    assert np.all(np.diff(trace.k) >= 0.0)
    assert np.all(trace.e_norm >= 0.0)
    assert report.min_e_norm == pytest.approx(trace.e_norm.min())
    # With gamma = 0 every estimate stays between its initial value and its bounds
    lower = np.minimum(initial_guess, adaptation.z_l) - 1e-12
    upper = np.maximum(initial_guess, adaptation.z_u) + 1e-12
    assert np.all((trace.z_hat >= lower) & (trace.z_hat <= upper))


def test_identification_is_deterministic(physical, spec, short_run, initial_guess):
    first, _ = _identify(physical, spec, short_run, initial_guess)
    second, _ = _identify(physical, spec, short_run, initial_guess)
    assert np.array_equal(first.trace.z_hat, second.trace.z_hat)
    assert np.array_equal(first.trace.e_norm, second.trace.e_norm)
    assert np.array_equal(first.estimates, second.estimates)


def test_unreachable_threshold_reports_best_effort(physical, spec, short_run, initial_guess):
    report, _ = _identify(physical, spec, short_run, initial_guess, threshold=0.0)
    assert not report.converged
    assert report.crossing_time is None
    best = int(np.argmin(report.trace.e_norm))
    assert np.array_equal(report.estimates, report.trace.z_hat[best])


def test_strict_mode_raises_without_crossing(physical, spec, short_run, initial_guess):
    cfg = AdaptationConfig.from_table(threshold=0.0)
    init = initial_observer_state(short_run, cfg, seed=0, z0=initial_guess)
    with pytest.raises(NoConvergenceError) as info:
        identify(short_run, physical, cfg, spec, init, strict=True)
    assert info.value.min_e_norm >= 0.0


def test_overflowing_n4_gain_reports_failing_time(physical, short_run, initial_guess):
    cfg = AdaptationConfig.from_table(k0=30.0)
    init = initial_observer_state(short_run, cfg, seed=0, z0=initial_guess)
    with pytest.raises(SeriesConvergenceError, match="t=0 s"):
        identify(short_run, physical, cfg, NussbaumSpec(kind="n4"), init)


def test_arithmetic_overflow_becomes_non_finite_state(monkeypatch, physical, spec, short_run, initial_guess):
    def overflow(*args):
        raise OverflowError("math range error")

    monkeypatch.setattr(identification, "_observer_rate", overflow)
    cfg = AdaptationConfig.from_table()
    init = initial_observer_state(short_run, cfg, seed=0, z0=initial_guess)
    with pytest.raises(NonFiniteStateError) as info:
        identify(short_run, physical, cfg, spec, init)
    assert info.value.time == 0.0


def test_computation_time_is_thread_cpu_time(monkeypatch, physical, spec, short_run, initial_guess):
    clock = iter([5.0, 7.5])
    monkeypatch.setattr(time, "thread_time", lambda: next(clock))
    report, _ = _identify(physical, spec, short_run, initial_guess)
    assert report.wall_time == 2.5


def test_identification_input_checks(physical, spec, adaptation, short_run, initial_guess):
    init = initial_observer_state(short_run, adaptation, seed=0, z0=initial_guess)
    single = make_trajectory([0.0], short_run.states[:1])
    with pytest.raises(ValueError):
        identify(single, physical, adaptation, spec, init)
    uneven = make_trajectory([0.0, 0.001, 0.003], short_run.states[:3])
    with pytest.raises(ValueError):
        identify(uneven, physical, adaptation, spec, init)


def test_crossing_index():
    assert crossing_index(np.array([0.001, 0.02, 0.03, 0.005, 0.004]), 0.01) == 3
    assert crossing_index(np.array([0.001, 0.002]), 0.01) == 0
    assert crossing_index(np.array([0.02, 0.03]), 0.01) is None
    assert crossing_index(np.array([0.02, 0.01, 0.005]), 0.01) == 2


def test_crossing_index_with_dwell():
    e_norm = np.array([0.001, 0.02, 0.005, 0.02, 0.005, 0.004, 0.003])
    assert crossing_index(e_norm, 0.01) == 2
    assert crossing_index(e_norm, 0.01, dwell_samples=2) == 4
    assert crossing_index(e_norm, 0.01, dwell_samples=3) is None


def _manual_trace():
    times = np.arange(6) * 0.1
    z_hat = np.repeat(np.arange(6.0)[:, None], 10, axis=1)
    e_norm = np.array([0.001, 0.02, 0.005, 0.004, 0.003, 0.002])
    velocities = np.array([1.0, 1.0, 1.0, 0.5, 0.0, 0.0])
    states = np.column_stack([np.zeros(6), np.zeros(6), velocities, np.zeros(6)])
    return ParameterTrace(times, z_hat, np.zeros(6), e_norm), make_trajectory(times, states)


def test_end_of_motion_index():
    _, measured = _manual_trace()
    assert end_of_motion_index(measured, 0.0) == 5
    assert end_of_motion_index(measured, 0.1) == 3
    assert end_of_motion_index(measured, 10.0) == 0


def test_extraction_with_averaging():
    trace, measured = _manual_trace()
    plain = extract_estimates(trace, measured, AdaptationConfig.from_table(), wall_time=1.0)
    assert plain.crossing_time == pytest.approx(0.2)
    assert np.all(plain.estimates == 2.0)

    until_rest = AdaptationConfig.from_table(averaging=True, motion_threshold=0.1)
    assert np.all(extract_estimates(trace, measured, until_rest, 1.0).estimates == 2.5)

    until_end = AdaptationConfig.from_table(averaging=True)
    assert np.all(extract_estimates(trace, measured, until_end, 1.0).estimates == 3.5)


def test_parameter_trace_csv(tmp_path, physical, spec, short_run, initial_guess):
    report, _ = _identify(physical, spec, short_run, initial_guess)
    path = tmp_path / "trace.csv"
    write_parameter_trace_csv(report, path)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(PARAMETER_TRACE_HEADER)
    assert len(lines) == len(short_run) + 1
    table = np.loadtxt(path, delimiter=",", skiprows=1)
    assert np.array_equal(table[:, 11], report.trace.k)


@pytest.mark.slow
def test_reference_scenario_runs_to_completion(physical, spec, truth, release_state, initial_guess, adaptation):
    fp0, fp1 = truth
    sim_cfg = SimConfig(duration=35.0, noise_sigma=0.1, noise_enabled=True, noise_in_degrees=True)
    clean = simulate(physical, fp0, fp1, release_state, sim_cfg)
    measured = measure(clean, sim_cfg)
    init = initial_observer_state(measured, adaptation, seed=0,
                                  ic_sigma=sim_cfg.ic_noise_sigma_native, z0=initial_guess)
    report = identify(measured, physical, adaptation, spec, init)
    assert report.converged
    assert report.crossing_time is not None
    assert report.crossing_time < 35.0
    assert np.all(np.diff(report.trace.k) >= 0.0)
    assert np.all(np.isfinite(report.estimates))
    assert report.trace.e_norm.size == 35001
