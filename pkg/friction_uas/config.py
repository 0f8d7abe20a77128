import math
from dataclasses import dataclass, replace

import numpy as np
import toml

from .baseline.greybox import OptConfig
from .errors import ConfigError
from .model.dynamics import CORIOLIS_FORMS
from .model.params import PhysicalParams, State, split_parameter_vector
from .presets import (ADAPTATION_SETUP, EXPERIMENT_PROTOCOL, FRICTION_ACTUAL,
                      FRICTION_INITIAL_GUESS, NUSSBAUM_SETUP, PARAMETER_NAMES,
                      PHYSICAL_PARAMETERS, SIMULATION_PROTOCOL)
from .sim.simulation import SimConfig
from .uas.nussbaum import NussbaumSpec
from .uas.observer import AdaptationConfig
from .utils import get_logger

logger = get_logger("config")

# Keys accepted in every table; anything else is a typo and is rejected
SIMULATION_KEYS = ("dt", "duration", "seed", "noise_sigma", "noise_enabled", "noise_in_degrees",
                   "ic_noise_sigma", "theta0_deg", "theta1_deg", "omega0_deg", "omega1_deg")
ADAPTATION_KEYS = ("gamma", "threshold", "averaging", "dwell_time", "motion_threshold", "k0")
ADAPTATION_VECTORS = ("z_l", "z_u", "lambda_l", "lambda_u")
NUSSBAUM_KEYS = ("kind", "lambda", "alpha", "series_tol", "max_terms", "max_argument")
OPTIMIZER_KEYS = ("max_evals", "init_simplex_scale", "tolerance", "x_tolerance")

SCHEMA = {
    "physical": tuple(PHYSICAL_PARAMETERS) + ("phi_deg",),
    "friction_truth": PARAMETER_NAMES,
    "initial_guess": PARAMETER_NAMES,
    "simulation": SIMULATION_KEYS,
    "adaptation": ADAPTATION_KEYS + ADAPTATION_VECTORS,
    "nussbaum": NUSSBAUM_KEYS,
    "optimizer": OPTIMIZER_KEYS,
    "model": ("coriolis",),
}
TOP_LEVEL_KEYS = ("seed", "verbose", "protocol")

# Defaults of the sampling step and the extraction settings per data source
PROTOCOLS = {
    "simulation": dict(SIMULATION_PROTOCOL),
    "experiment": {**SIMULATION_PROTOCOL, **EXPERIMENT_PROTOCOL},
}


def load_user_config(config_path):
    """
    Loads and parses a TOML configuration file.

    This function reads a TOML file specified by the `config_path` parameter
    and parses it into a Python dictionary.

    Args:
        config_path (str): The path to the TOML configuration file.

    Returns:
        dict: The configuration settings parsed from the TOML file, represented as a dictionary.

    Raises:
        ConfigError: If the file is not valid TOML.
    """
    # Open and read the TOML configuration file
    with open(config_path, 'r') as config_file:
        # Use the toml library to parse the file into a Python dictionary
        try:
            config = toml.load(config_file)
        except toml.TomlDecodeError as err:
            raise ConfigError(f"{config_path}: {err}") from err
    # Return the parsed configuration
    return config


@dataclass(frozen=True, eq=False)
class RunConfig:
    """
    Everything a command needs: rig, truth, scenario, observer, optimizer and model settings.

    `initial_guess` holds the starting estimates of both methods, or None when they are
    drawn from the bounds with the run seed.
    """
    physical: PhysicalParams
    friction_truth: tuple
    initial_state: State
    simulation: SimConfig
    adaptation: AdaptationConfig
    nussbaum: NussbaumSpec
    optimizer: OptConfig
    coriolis: str = "consistent"
    seed: int = 0
    verbose: bool = False
    initial_guess: object = None
    protocol: str = "simulation"

    def with_seed(self, seed):
        """
        Returns a copy where `seed` drives every random stream.
        """
        return replace(self, seed=int(seed), simulation=replace(self.simulation, seed=int(seed)))


def _check_keys(table_name, table, allowed):
    if not isinstance(table, dict):
        raise ConfigError(f"[{table_name}] must be a table")
    unknown = sorted(set(table) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in [{table_name}]: {', '.join(unknown)}")


def _number(table_name, key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{table_name}.{key} must be a number, got {value!r}")
    if not math.isfinite(value) and not (key == "threshold" and value == math.inf):
        raise ConfigError(f"{table_name}.{key} must be finite, got {value!r}")
    return float(value)


def _integer(table_name, key, value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{table_name}.{key} must be an integer, got {value!r}")
    return value


def _flag(table_name, key, value):
    if not isinstance(value, bool):
        raise ConfigError(f"{table_name}.{key} must be true or false, got {value!r}")
    return value


def _build(table_name, factory, **kwargs):
    # Component invariants are checked by the dataclasses; report them against the table
    try:
        return factory(**kwargs)
    except ValueError as err:
        raise ConfigError(f"[{table_name}]: {err}") from err


def _physical(table):
    if "phi_deg" not in table:
        raise ConfigError("physical.phi_deg is required: the tilt of the base axis has no default")
    phi_deg = _number("physical", "phi_deg", table["phi_deg"])
    if not 0.0 < phi_deg <= 90.0:
        raise ConfigError(f"physical.phi_deg must lie in (0, 90], got {phi_deg}")
    overrides = {key: _number("physical", key, value) for key, value in table.items() if key != "phi_deg"}
    return _build("physical", PhysicalParams.from_table, phi=math.radians(phi_deg), **overrides)


def _friction_truth(table):
    values = dict(FRICTION_ACTUAL)
    values.update({key: _number("friction_truth", key, value) for key, value in table.items()})
    try:
        return split_parameter_vector([values[name] for name in PARAMETER_NAMES])
    except ValueError as err:
        raise ConfigError(f"[friction_truth]: {err}") from err


def _simulation(table, seed, protocol):
    values = dict(protocol)
    values["seed"] = seed
    for key, value in table.items():
        if key in ("noise_enabled", "noise_in_degrees"):
            values[key] = _flag("simulation", key, value)
        elif key == "seed":
            values[key] = _integer("simulation", key, value)
        else:
            values[key] = _number("simulation", key, value)
    initial_state = _build("simulation", State.from_degrees, theta0=values["theta0_deg"],
                           theta1=values["theta1_deg"], omega0=values["omega0_deg"],
                           omega1=values["omega1_deg"])
    sim = _build("simulation", SimConfig, dt=values["dt"], duration=values["duration"],
                 seed=values["seed"], noise_sigma=values["noise_sigma"],
                 noise_enabled=values["noise_enabled"], noise_in_degrees=values["noise_in_degrees"],
                 ic_noise_sigma=values["ic_noise_sigma"])
    return initial_state, sim


def _adaptation(table, protocol):
    values = {"threshold": protocol["threshold"], "averaging": protocol["averaging"],
              "gamma": ADAPTATION_SETUP["gamma"], "k0": ADAPTATION_SETUP["k0"]}
    vectors = {name: dict(ADAPTATION_SETUP[name]) for name in ADAPTATION_VECTORS}
    for key, value in table.items():
        if key in ADAPTATION_VECTORS:
            _check_keys(f"adaptation.{key}", value, PARAMETER_NAMES)
            vectors[key].update({name: _number(f"adaptation.{key}", name, v) for name, v in value.items()})
        elif key == "averaging":
            values[key] = _flag("adaptation", key, value)
        else:
            values[key] = _number("adaptation", key, value)
    return _build("adaptation", AdaptationConfig, **vectors, **values)


def _initial_guess(table, adaptation):
    values = dict(FRICTION_INITIAL_GUESS)
    values.update({key: _number("initial_guess", key, value) for key, value in table.items()})
    guess = np.array([values[name] for name in PARAMETER_NAMES])
    if np.any(guess <= 0.0):
        bad = [name for name, value in zip(PARAMETER_NAMES, guess) if value <= 0.0]
        raise ConfigError(f"initial guesses must be strictly positive: {', '.join(bad)}")
    outside = [name for name, value, lower, upper in zip(PARAMETER_NAMES, guess, adaptation.z_l, adaptation.z_u)
               if not lower <= value <= upper]
    if outside:
        # The observer starts there anyway; the optimizer projects the start onto the bounds
        logger.warning("initial guesses outside the adaptation bounds: %s", ", ".join(outside))
    return guess


def _nussbaum(table):
    values = dict(NUSSBAUM_SETUP)
    for key, value in table.items():
        if key == "kind":
            values[key] = str(value)
        elif key == "max_terms":
            values[key] = _integer("nussbaum", key, value)
        else:
            values[key] = _number("nussbaum", key, value)
    values["lam"] = values.pop("lambda")
    return _build("nussbaum", NussbaumSpec, **values)


def _optimizer(table):
    values = {}
    for key, value in table.items():
        values[key] = _integer("optimizer", key, value) if key == "max_evals" else _number("optimizer", key, value)
    return _build("optimizer", OptConfig, **values)


def parse_run_config(config, seed=None):
    """
    Assembles a RunConfig from a parsed configuration dictionary.

    Every key except physical.phi_deg falls back to the reference tables in `presets`.
    The top-level `protocol` ("simulation" or "experiment") selects the defaults of the
    sampling step and the estimate extraction.

    Args:
        config (dict): Parsed TOML content.
        seed (int, optional): Overrides every seed of the configuration.

    Returns:
        RunConfig: The validated configuration.

    Raises:
        ConfigError: On unknown keys, wrong types or violated invariants.
    """
    _check_keys("top level", config, tuple(SCHEMA) + TOP_LEVEL_KEYS)
    tables = {}
    for name, allowed in SCHEMA.items():
        table = config.get(name, {})
        _check_keys(name, table, allowed)
        tables[name] = table
    if "physical" not in config:
        raise ConfigError("the [physical] table is required (it must at least set phi_deg)")

    base_seed = _integer("top level", "seed", config.get("seed", 0))
    verbose = _flag("top level", "verbose", config.get("verbose", False))
    coriolis = tables["model"].get("coriolis", "consistent")
    if coriolis not in CORIOLIS_FORMS:
        raise ConfigError(f"model.coriolis must be one of {CORIOLIS_FORMS}, got {coriolis!r}")

    protocol_name = config.get("protocol", "simulation")
    if not isinstance(protocol_name, str) or protocol_name not in PROTOCOLS:
        raise ConfigError(f"protocol must be one of {tuple(PROTOCOLS)}, got {protocol_name!r}")
    protocol = PROTOCOLS[protocol_name]

    initial_state, sim = _simulation(tables["simulation"], base_seed, protocol)
    adaptation = _adaptation(tables["adaptation"], protocol)
    initial_guess = _initial_guess(tables["initial_guess"], adaptation) if "initial_guess" in config else None
    run = RunConfig(
        physical=_physical(tables["physical"]),
        friction_truth=_friction_truth(tables["friction_truth"]),
        initial_state=initial_state,
        simulation=sim,
        adaptation=adaptation,
        nussbaum=_nussbaum(tables["nussbaum"]),
        optimizer=_optimizer(tables["optimizer"]),
        coriolis=coriolis,
        seed=base_seed,
        verbose=verbose,
        initial_guess=initial_guess,
        protocol=protocol_name,
    )
    return run if seed is None else run.with_seed(seed)


def load_run_config(config_path, seed=None):
    """
    Loads a TOML configuration file into a RunConfig.

    Args:
        config_path (str): Path to the configuration file.
        seed (int, optional): Overrides every seed of the configuration.

    Returns:
        RunConfig: The validated configuration.
    """
    return parse_run_config(load_user_config(config_path), seed=seed)
