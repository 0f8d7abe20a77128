import math

import numpy as np
import pytest

from friction_uas.config import load_run_config, load_user_config, parse_run_config
from friction_uas.errors import ConfigError
from friction_uas.presets import FRICTION_INITIAL_GUESS
from friction_uas.utils import get_default_config_path

from .conftest import parameter_vector


def _minimal(**tables):
    config = {"physical": {"phi_deg": 30.0}}
    config.update(tables)
    return config


def test_example_config_loads():
    run = load_run_config(get_default_config_path())
    assert run.physical.phi == pytest.approx(math.radians(30.0))
    assert run.initial_state.theta1 == pytest.approx(math.radians(120.0))
    assert run.simulation.noise_enabled
    assert run.simulation.noise_in_degrees
    assert run.simulation.duration == 35.0
    assert run.adaptation.z_u[0] == 0.075
    assert run.nussbaum.kind == "mittag_leffler"
    assert run.nussbaum.alpha == 3.0
    assert run.optimizer.max_evals == 2000
    assert run.coriolis == "consistent"
    assert run.protocol == "simulation"
    assert np.array_equal(run.initial_guess, parameter_vector(FRICTION_INITIAL_GUESS))


def test_defaults_come_from_reference_tables():
    run = parse_run_config(_minimal())
    fp0, fp1 = run.friction_truth
    assert fp0.mu_d == 5e-4
    assert fp1.mu_s == 7e-4
    assert run.adaptation.threshold == 0.01
    assert np.all(run.adaptation.lambda_l == 50.0)
    assert run.seed == 0


def test_overrides_are_applied():
    run = parse_run_config(_minimal(
        friction_truth={"mu_v1": 3e-4},
        adaptation={"threshold": 0.05, "averaging": True, "lambda_u": {"F_nt1": 2.0}},
        nussbaum={"kind": "n2", "lambda": 2.0},
        model={"coriolis": "printed"},
    ))
    assert run.friction_truth[1].mu_v == 3e-4
    assert run.adaptation.averaging
    assert run.adaptation.lambda_u[9] == 2.0
    assert run.adaptation.lambda_u[0] == 1.0
    assert run.nussbaum.lam == 2.0
    assert run.coriolis == "printed"


def test_infinite_threshold_accepted():
    assert parse_run_config(_minimal(adaptation={"threshold": math.inf})).adaptation.threshold == math.inf


def test_seed_override_reaches_every_stream():
    run = parse_run_config(_minimal(seed=3), seed=11)
    assert run.seed == 11
    assert run.simulation.seed == 11
    assert parse_run_config(_minimal(seed=3)).simulation.seed == 3


@pytest.mark.parametrize("config", [
    {},
    {"physical": {}},
    {"physical": {"phi_deg": 0.0}},
    {"physical": {"phi_deg": 120.0}},
    {"physical": {"phi_deg": "thirty"}},
    {"physical": {"phi_deg": 30.0, "m1": -1.0}},
    _minimal(simulation={"dt": 0.0}),
    _minimal(simulation={"noise_enabled": 1}),
    _minimal(adaptation={"lambda_l": {"mu_d0": -1.0}}),
    _minimal(adaptation={"z_u": {"mu_d2": 0.1}}),
    _minimal(nussbaum={"alpha": 1.5}),
    _minimal(optimizer={"max_evals": 10.5}),
    _minimal(model={"coriolis": "exact"}),
    _minimal(friction_truth={"theta_dot_t0": 0.0}),
    _minimal(solver={}),
    _minimal(simulation={"duraton": 1.0}),
])
def test_invalid_configurations_rejected(config):
    with pytest.raises(ConfigError):
        parse_run_config(config)


def test_unknown_key_is_named():
    with pytest.raises(ConfigError, match="duraton"):
        parse_run_config(_minimal(simulation={"duraton": 1.0}))


def test_invalid_toml(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("[physical\nphi_deg = 30\n")
    with pytest.raises(ConfigError):
        load_user_config(path)


def test_toml_round_trip(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text("seed = 5\n\n[physical]\nphi_deg = 45.0\n\n[simulation]\nduration = 1.0\n")
    run = load_run_config(path)
    assert run.physical.phi == pytest.approx(math.pi / 4)
    assert run.simulation.duration == 1.0
    assert run.simulation.seed == 5


def test_experiment_protocol_defaults():
    run = parse_run_config(_minimal(protocol="experiment"))
    assert run.simulation.dt == 1e-4
    assert run.adaptation.threshold == 0.05
    assert run.adaptation.averaging
    tuned = parse_run_config(_minimal(protocol="experiment", adaptation={"averaging": False}))
    assert not tuned.adaptation.averaging


def test_initial_guess_table():
    assert parse_run_config(_minimal()).initial_guess is None
    run = parse_run_config(_minimal(initial_guess={"mu_v1": 1e-3}))
    expected = parameter_vector(FRICTION_INITIAL_GUESS)
    expected[7] = 1e-3
    assert np.array_equal(run.initial_guess, expected)


@pytest.mark.parametrize("config", [
    _minimal(protocol="hardware"),
    _minimal(protocol=["experiment"]),
    _minimal(initial_guess={"F_nt0": 0.0}),
    _minimal(initial_guess={"F_nt2": 0.1}),
])
def test_invalid_protocol_and_guesses_rejected(config):
    with pytest.raises(ConfigError):
        parse_run_config(config)
