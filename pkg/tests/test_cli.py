import numpy as np
import pytest

from friction_uas.cli import main
from friction_uas.config import load_run_config
from friction_uas.model.params import join_parameter_vector
from friction_uas.report import parse_key_values
from friction_uas.sim.trajectory import read_trajectory_csv

SHORT_CONFIG = """
seed = 0

[physical]
phi_deg = 30.0

[simulation]
duration = 0.2

[optimizer]
max_evals = 3
"""


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(SHORT_CONFIG)
    return str(path)


@pytest.fixture
def simulated(tmp_path, config_path):
    out_dir = tmp_path / "sim"
    assert main(["simulate", "--config", config_path, "--out-dir", str(out_dir)]) == 0
    return out_dir


def _key_values(path):
    return parse_key_values(path.read_text(encoding="utf-8"))


def test_simulate_writes_trajectories(simulated):
    clean = read_trajectory_csv(simulated / "trajectory.csv")
    measured = read_trajectory_csv(simulated / "measured.csv")
    assert len(clean) == 201
    assert np.array_equal(clean.times, measured.times)
    assert not np.array_equal(clean.states, measured.states)
    energy = np.loadtxt(simulated / "energy.csv", delimiter=",", skiprows=1)
    assert energy.shape == (201, 2)


def test_simulation_at_rest(tmp_path):
    config = tmp_path / "rest.toml"
    config.write_text(SHORT_CONFIG.replace(
        "duration = 0.2", "duration = 0.2\ntheta1_deg = 0.0\nnoise_enabled = false"))
    assert main(["simulate", "--config", str(config), "--out-dir", str(tmp_path)]) == 0
    assert np.all(read_trajectory_csv(tmp_path / "measured.csv").states == 0.0)


@pytest.mark.parametrize("method", ["uas", "opt"])
def test_identify(tmp_path, config_path, simulated, method):
    out_dir = tmp_path / method
    argv = ["identify", "--config", config_path, "--input", str(simulated / "measured.csv"),
            "--method", method, "--out-dir", str(out_dir)]
    assert main(argv) == 0
    report = _key_values(out_dir / "report.txt")
    assert report["method"] == method
    assert all(f"z{n}" in report for n in range(1, 11))
    assert report["converged"] in ("true", "false")
    trace_header = (out_dir / "trace.csv").read_text().splitlines()[0]
    if method == "opt":
        assert report["evaluations"] == "3"
        assert trace_header == "eval,objective,best"
    else:
        assert report["evaluations"] == "none"
        assert trace_header.startswith("t,z1,")


def test_validate_with_true_parameters(tmp_path, config_path, simulated):
    fp0, fp1 = load_run_config(config_path).friction_truth
    estimates = tmp_path / "truth.txt"
    estimates.write_text(" ".join(repr(float(v)) for v in join_parameter_vector(fp0, fp1)) + "\n")
    argv = ["validate", "--config", config_path, "--input", str(simulated / "trajectory.csv"),
            "--estimates", str(estimates), "--out-dir", str(tmp_path / "val")]
    assert main(argv) == 0
    validation = _key_values(tmp_path / "val" / "validation.txt")
    assert float(validation["r2_theta0"]) == 100.0
    assert float(validation["r2_theta1"]) == 100.0
    assert float(validation["condition_fraction"]) == 0.0
    assert 0.0 <= float(validation["saturated_fraction"]) <= 1.0
    assert (tmp_path / "val" / "spectrum_reference.csv").exists()
    assert (tmp_path / "val" / "spectrum_estimated.csv").exists()


def test_validate_rejects_short_estimates(tmp_path, config_path, simulated):
    estimates = tmp_path / "short.txt"
    estimates.write_text("1 2 3 4 5 6 7 8 9\n")
    argv = ["validate", "--config", config_path, "--input", str(simulated / "trajectory.csv"),
            "--estimates", str(estimates), "--out-dir", str(tmp_path)]
    assert main(argv) == 1


def test_identify_rejects_malformed_csv(tmp_path, config_path):
    broken = tmp_path / "broken.csv"
    broken.write_text("t,theta0,theta1,omega0,omega1\n0,0,0,0,0\n0.001,0,0\n")
    argv = ["identify", "--config", config_path, "--input", str(broken), "--out-dir", str(tmp_path)]
    assert main(argv) == 1


def test_identify_with_overflowing_n4_exits_with_one(tmp_path, simulated):
    config = tmp_path / "n4.toml"
    config.write_text(SHORT_CONFIG + "\n[adaptation]\nk0 = 30.0\n\n[nussbaum]\nkind = \"n4\"\n")
    argv = ["identify", "--config", str(config), "--input", str(simulated / "measured.csv"),
            "--out-dir", str(tmp_path / "n4")]
    assert main(argv) == 1


def test_bad_configuration_exits_with_one(tmp_path):
    config = tmp_path / "bad.toml"
    config.write_text("[physical]\nm1 = 0.3\n")
    assert main(["simulate", "--config", str(config), "--out-dir", str(tmp_path)]) == 1


@pytest.mark.parametrize("argv", [
    ["simulate"],
    ["identify", "--config", "run.toml"],
    ["validate", "--config", "run.toml", "--input", "trajectory.csv"],
    ["fly", "--config", "run.toml"],
])
def test_usage_errors_exit_with_two(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_compare_is_deterministic(tmp_path, config_path):
    texts = []
    for name in ("first", "second"):
        out_dir = tmp_path / name
        assert main(["compare", "--config", config_path, "--out-dir", str(out_dir)]) == 0
        texts.append((out_dir / "comparison.txt").read_text())
        assert (out_dir / "timing.txt").read_text().startswith("method,wall_time,normalized_time")
    assert texts[0] == texts[1]
    lines = texts[0].splitlines()
    assert lines[0] == "method,fit_theta0,fit_theta1,converged,evaluations,crossing_time"
    assert [line.split(",")[0] for line in lines[1:]] == ["uas", "opt"]
    assert lines[2].split(",")[4] == "3"
