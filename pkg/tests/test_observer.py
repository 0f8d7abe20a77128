import numpy as np
import pytest

from friction_uas.model.dynamics import dynamics_rhs, eval_H
from friction_uas.model.friction import friction_torque, normal_force
from friction_uas.model.params import State, perturb_state
from friction_uas.sim.integrator import rk4_step
from friction_uas.uas.nussbaum import NussbaumSpec
from friction_uas.uas.observer import (OBSERVER_SIZE, AdaptationConfig, ObserverState,
                                       adapt_rhs, estimated_friction, initial_guess_sample,
                                       initial_observer_state, lti_solution, observer_rhs,
                                       uas_input)


def _observer(state, z_hat, k=1e-3):
    x = state.as_array()
    return ObserverState(x[0:2], x[2:4], k, np.asarray(z_hat, dtype=float))


def test_adaptation_stops_without_error(adaptation, initial_guess):
    assert np.all(adapt_rhs(adaptation, initial_guess, 0.0) == 0.0)
    with pytest.raises(ValueError):
        adapt_rhs(adaptation, initial_guess, -1e-3)


def test_adaptation_pulls_towards_steady_state(adaptation, initial_guess):
    rate = adapt_rhs(adaptation, initial_guess, 0.05)
    assert np.all(np.sign(rate) == np.sign(adaptation.steady_state - initial_guess))
    assert np.allclose(adapt_rhs(adaptation, adaptation.steady_state, 0.05), 0.0, atol=1e-15)


def test_steady_state_formula(adaptation):
    expected = (adaptation.z_u + 50.0 * adaptation.z_l) / 51.0
    assert np.allclose(adaptation.steady_state, expected, rtol=1e-12)


def test_constant_error_norm_matches_closed_form(adaptation, initial_guess):
    dt, e_norm = 1e-3, 0.05
    z = initial_guess.copy()
    for _ in range(2000):
        z = rk4_step(lambda z: adapt_rhs(adaptation, z, e_norm), z, dt)
    assert np.allclose(z, lti_solution(adaptation, initial_guess, e_norm, 2.0), rtol=0.0, atol=1e-8)
    assert lti_solution(adaptation, initial_guess, e_norm, np.array([0.0, 1.0])).shape == (2, 10)
    assert np.allclose(lti_solution(adaptation, initial_guess, e_norm, 0.0), initial_guess)


def test_uas_input_vanishes_without_error(physical, spec, initial_guess):
    obs = _observer(State(0.1, 1.0, 0.5, -0.2), initial_guess, k=2.0)
    assert uas_input(physical, obs, np.zeros(2), spec).as_array().tolist() == [0.0, 0.0]


def test_uas_input_at_unit_nussbaum_gain(physical, spec, initial_guess):
    state = State(0.1, 1.0, 0.5, -0.2)
    e = np.array([0.02, -0.01])
    u = uas_input(physical, _observer(state, initial_guess, k=0.0), e, spec)
    assert np.allclose(u.as_array(), eval_H(physical, state) @ e, rtol=1e-12)


def test_uas_input_at_nussbaum_root(physical, initial_guess):
    obs = _observer(State(0.1, 1.0, 0.5, -0.2), initial_guess, k=(np.pi / 2) ** 2)
    u = uas_input(physical, obs, np.array([0.3, -0.4]), NussbaumSpec(kind="n2"))
    assert np.allclose(u.as_array(), 0.0, atol=1e-12)


def test_observer_rate_without_error(physical, adaptation, spec, truth, truth_vector):
    fp0, fp1 = truth
    state = State(0.2, 1.4, 0.7, -1.1)
    rate = observer_rhs(physical, _observer(state, truth_vector), state, adaptation, spec)
    assert rate.shape == (OBSERVER_SIZE,)
    assert rate[4] == 0.0
    assert np.all(rate[5:] == 0.0)
    assert np.allclose(rate[:4], dynamics_rhs(physical, fp0, fp1, state), rtol=1e-12, atol=1e-15)


def test_gain_integrates_squared_error(physical, adaptation, spec, initial_guess):
    obs = _observer(State(0.2, 1.4, 0.0, 0.0), initial_guess)
    rate = observer_rhs(physical, obs, State(0.2, 1.4, 0.3, 0.4), adaptation, spec)
    assert rate[4] == pytest.approx(0.25, rel=1e-12)
    assert np.allclose(rate[5:], adapt_rhs(adaptation, initial_guess, 0.5))


def test_estimated_friction_at_true_parameters(physical, truth, truth_vector):
    fp0, fp1 = truth
    omega = np.array([0.004, -2.3])
    forces = (normal_force(physical, None, 0), normal_force(physical, None, 1))
    torques = estimated_friction(truth_vector, omega, forces)
    assert torques[0] == friction_torque(fp0, omega[0], forces[0])
    assert torques[1] == friction_torque(fp1, omega[1], forces[1])


def test_initial_guess_with_collapsed_bounds(truth_vector):
    cfg = AdaptationConfig.from_table(z_l=truth_vector, z_u=truth_vector)
    assert np.array_equal(initial_guess_sample(cfg, seed=5), truth_vector)


def test_initial_guess_statistics(adaptation):
    draws = np.array([initial_guess_sample(adaptation, seed) for seed in range(10_000)])
    assert np.all(draws >= adaptation.z_l)
    assert np.all(draws <= adaptation.z_u)
    midpoint = 0.5 * (adaptation.z_l + adaptation.z_u)
    assert np.allclose(draws.mean(axis=0), midpoint, rtol=0.02)
    assert np.array_equal(initial_guess_sample(adaptation, 3), initial_guess_sample(adaptation, 3))


def test_initial_observer_state(short_run, adaptation, initial_guess):
    obs = initial_observer_state(short_run, adaptation, seed=0, z0=initial_guess)
    assert np.array_equal(obs.q_hat, short_run.states[0, :2])
    assert np.array_equal(obs.q_hat_dot, short_run.states[0, 2:])
    assert obs.k == adaptation.k0
    assert np.array_equal(obs.z_hat, initial_guess)
    perturbed = initial_observer_state(short_run, adaptation, seed=0, ic_sigma=1e-3)
    assert not np.array_equal(perturbed.q_hat, short_run.states[0, :2])
    expected = perturb_state(short_run.state(0), 1e-3, seed=0).as_array()
    assert np.array_equal(np.concatenate([perturbed.q_hat, perturbed.q_hat_dot]), expected)


def test_observer_state_vector_layout(initial_guess):
    obs = _observer(State(0.1, 0.2, 0.3, 0.4), initial_guess, k=0.5)
    x = obs.to_vector()
    assert x[4] == 0.5
    assert np.array_equal(ObserverState.from_vector(x).z_hat, initial_guess)
    with pytest.raises(ValueError):
        ObserverState.from_vector(x[:14])


@pytest.mark.parametrize("overrides", [
    {"lambda_l": 0.0},
    {"z_l": 1.0},
    {"threshold": -0.01},
    {"dwell_time": -1.0},
    {"k0": -1e-3},
    {"z_u": {"mu_d0": 0.1}},
])
def test_adaptation_config_validation(overrides):
    with pytest.raises(ValueError):
        AdaptationConfig.from_table(**overrides)
