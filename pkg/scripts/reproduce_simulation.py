import sys

from friction_uas.cli import run_method, simulate_scenario, validate_estimates
from friction_uas.config import load_run_config
from friction_uas.model.params import join_parameter_vector
from friction_uas.presets import FRICTION_SIM_ESTIMATE, PARAMETER_NAMES
from friction_uas.utils import configure_logging


def main():
    """
    Simulates the configured scenario, identifies the friction with the UAS observer and
    prints every estimate next to its true value and the reference study's estimate,
    followed by the validation fit.

    Expects a command-line argument specifying the path to the configuration file.
    The script will terminate with an error message if the configuration file path is not provided.
    """
    # Verify that the script is called with the required number of arguments
    if len(sys.argv) < 2:
        print("Error: Missing argument. Please provide the path to the configuration file.")
        sys.exit(1)

    # Load the run configuration from the specified path
    run = load_run_config(sys.argv[1])
    configure_logging(run.verbose)

    # Generate clean and noisy data with the reference friction
    clean, measured = simulate_scenario(run)

    # Identify from the noisy data and validate against the clean response
    report = run_method("uas", measured, run)
    fit, _ = validate_estimates(report.estimates, clean, run, report.wall_time)

    truth = join_parameter_vector(*run.friction_truth)
    print(f"{'parameter':>14} {'actual':>12} {'reported':>12} {'estimate':>12} {'error %':>9}")
    for name, actual, estimate in zip(PARAMETER_NAMES, truth, report.estimates):
        print(f"{name:>14} {actual:12.4e} {FRICTION_SIM_ESTIMATE[name]:12.4e} {estimate:12.4e} "
              f"{100.0 * (estimate - actual) / actual:9.2f}")

    crossing = "never" if report.crossing_time is None else f"{report.crossing_time:.3f} s"
    print(f"threshold crossing: {crossing}, min ||e|| = {report.min_e_norm:.3g} rad/s")
    print(f"fit theta0 = {fit.r2_theta0:.2f} %, fit theta1 = {fit.r2_theta1:.2f} %, "
          f"wall time = {report.wall_time:.2f} s")


if __name__ == "__main__":
    main()
