"""
Command-line entry point: simulate, identify, validate and compare.
"""
import argparse
import os
import sys
import threading

import numpy as np

from .baseline.greybox import optimize, write_objective_trace_csv
from .config import load_run_config
from .errors import FrictionUASError
from .metrics import fit_report, normalized_time, write_spectrum_csv
from .model.params import split_parameter_vector
from .report import read_estimates, write_report
from .sim.simulation import energy_trace, measure, resimulate, simulate
from .sim.trajectory import CSV_FLOAT_FORMAT, read_trajectory_csv, write_trajectory_csv
from .uas.diagnostics import condition_report
from .uas.identification import identify, write_parameter_trace_csv
from .uas.observer import initial_observer_state
from .utils import configure_logging, get_logger

logger = get_logger("cli")

METHODS = ("uas", "opt")


class MethodTask(threading.Thread):
    """
    Runs one identification method in a background thread.

    Attributes:
        msg (str): A message describing the task's purpose.
        f (function): The function to be executed in the background.
        args (tuple): Positional arguments passed to `f`.
        result: Return value of `f` once the thread has finished.
        error (Exception or None): Exception raised by `f`, re-raised by `wait`.
    """

    def __init__(self, msg, f, *args):
        super().__init__(name=msg, daemon=True)
        self.msg = msg
        self.f = f
        self.args = args
        self.result = None
        self.error = None

    def run(self):
        """
        Executes the stored function and keeps its result or its exception.
        """
        logger.info("%s", self.msg)
        try:
            self.result = self.f(*self.args)
        except Exception as err:  # re-raised in the joining thread
            self.error = err

    def wait(self):
        """
        Joins the thread and returns the result, re-raising any exception of the task.
        """
        self.join()
        if self.error is not None:
            raise self.error
        return self.result


def simulate_scenario(run):
    """
    Simulates the configured scenario with the reference friction.

    Returns:
        tuple[Trajectory, Trajectory]: The clean trajectory and the measurements.
    """
    fp0, fp1 = run.friction_truth
    clean = simulate(run.physical, fp0, fp1, run.initial_state, run.simulation, coriolis=run.coriolis)
    return clean, measure(clean, run.simulation)


def run_method(method, measured, run):
    """
    Identifies the friction parameters from measurements with the observer or the optimizer.

    Args:
        method (str): "uas" or "opt".
        measured (Trajectory): Measurements.
        run (RunConfig): Configuration.

    Returns:
        IdentificationReport: The raw report, without validation fields.
    """
    if method == "uas":
        init = initial_observer_state(measured, run.adaptation, run.seed,
                                      ic_sigma=run.simulation.ic_noise_sigma_native, z0=run.initial_guess)
        return identify(measured, run.physical, run.adaptation, run.nussbaum, init, coriolis=run.coriolis)
    if method == "opt":
        return optimize(measured, run.physical, run.optimizer, run.adaptation, run.seed,
                        x0=run.initial_guess, coriolis=run.coriolis)
    raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")


def validate_estimates(estimates, reference, run, computation_time=None):
    """
    Simulates the plant with estimated friction on the reference grid and scores the fit.

    Returns:
        tuple[FitReport, Trajectory]: The fit and the simulated trajectory.
    """
    fp0, fp1 = split_parameter_vector(estimates)
    estimated = resimulate(run.physical, fp0, fp1, reference, coriolis=run.coriolis)
    return fit_report(reference, estimated, computation_time), estimated


def _finish_report(report, reference, run):
    fit, _ = validate_estimates(report.estimates, reference, run, report.wall_time)
    normalized = normalized_time(report.wall_time, reference.duration, 1.0 / reference.dt) \
        if report.wall_time > 0.0 else None
    return report.with_fit(fit, normalized)


def cmd_simulate(args, run):
    clean, measured = simulate_scenario(run)
    write_trajectory_csv(clean, os.path.join(args.out_dir, "trajectory.csv"))
    write_trajectory_csv(measured, os.path.join(args.out_dir, "measured.csv"))
    energy = np.column_stack([clean.times, energy_trace(run.physical, clean)])
    np.savetxt(os.path.join(args.out_dir, "energy.csv"), energy, fmt=CSV_FLOAT_FORMAT,
               delimiter=",", header="t,energy", comments="")
    logger.info("wrote %d samples to %s", len(clean), args.out_dir)


def cmd_identify(args, run):
    measured = read_trajectory_csv(args.input)
    report = _finish_report(run_method(args.method, measured, run), measured, run)
    write_report(report, os.path.join(args.out_dir, "report.txt"))
    trace_path = os.path.join(args.out_dir, "trace.csv")
    if args.method == "uas":
        write_parameter_trace_csv(report, trace_path)
    else:
        write_objective_trace_csv(report, trace_path)
    if not report.converged:
        logger.warning("%s identification did not converge; estimates are best effort", args.method)
    logger.info("fit theta0=%.2f%% theta1=%.2f%%", report.fit_theta0, report.fit_theta1)


def cmd_validate(args, run):
    reference = read_trajectory_csv(args.input)
    estimates = read_estimates(args.estimates)
    fit, estimated = validate_estimates(estimates, reference, run)
    # The configured truth is the reference of the convergence-condition check
    fp0, fp1 = run.friction_truth
    condition = condition_report(run.physical, fp0, fp1, estimates, reference)
    with open(os.path.join(args.out_dir, "validation.txt"), "w", encoding="utf-8") as validation_file:
        validation_file.write(fit.to_text() + condition.to_text())
    write_spectrum_csv(reference, os.path.join(args.out_dir, "spectrum_reference.csv"))
    write_spectrum_csv(estimated, os.path.join(args.out_dir, "spectrum_estimated.csv"))
    logger.info("fit theta0=%.2f%% theta1=%.2f%%", fit.r2_theta0, fit.r2_theta1)
    logger.info("convergence condition holds on %.1f%% of the samples, tanh saturated on %.1f%%",
                100.0 * condition.condition_fraction, 100.0 * condition.saturated_fraction)


def compare_methods(run):
    """
    Runs both methods concurrently on the same measurements and validates them
    against the clean trajectory.

    Returns:
        dict: Method name to validated IdentificationReport, in METHODS order.
    """
    clean, measured = simulate_scenario(run)
    tasks = [MethodTask(f"running {method} identification", run_method, method, measured, run)
             for method in METHODS]
    for task in tasks:
        task.start()
    reports = {method: task.wait() for method, task in zip(METHODS, tasks)}
    return {method: _finish_report(report, clean, run) for method, report in reports.items()}


def format_comparison(reports):
    """
    Timing-free comparison table; identical seeds give identical text.
    """
    lines = ["method,fit_theta0,fit_theta1,converged,evaluations,crossing_time"]
    for method, report in reports.items():
        lines.append(",".join([
            method,
            f"{report.fit_theta0:.6f}",
            f"{report.fit_theta1:.6f}",
            "true" if report.converged else "false",
            "none" if report.evaluations is None else str(report.evaluations),
            "none" if report.crossing_time is None else repr(report.crossing_time),
        ]))
    return "\n".join(lines) + "\n"


def format_timing(reports):
    lines = ["method,wall_time,normalized_time"]
    for method, report in reports.items():
        normalized = "none" if report.normalized_time is None else repr(report.normalized_time)
        lines.append(f"{method},{report.wall_time!r},{normalized}")
    return "\n".join(lines) + "\n"


def cmd_compare(args, run):
    reports = compare_methods(run)
    with open(os.path.join(args.out_dir, "comparison.txt"), "w", encoding="utf-8") as comparison_file:
        comparison_file.write(format_comparison(reports))
    with open(os.path.join(args.out_dir, "timing.txt"), "w", encoding="utf-8") as timing_file:
        timing_file.write(format_timing(reports))
    uas, opt = reports["uas"], reports["opt"]
    if uas.wall_time > 0.0:
        logger.info("optimizer took %.1fx the observer's computation time", opt.wall_time / uas.wall_time)


COMMANDS = {
    "simulate": cmd_simulate,
    "identify": cmd_identify,
    "validate": cmd_validate,
    "compare": cmd_compare,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="friction-uas",
        description="Friction identification of a tilted Furuta pendulum with a universal adaptive observer.")
    parser.add_argument("command", choices=tuple(COMMANDS), help="operation to run")
    parser.add_argument("--config", required=True, help="TOML configuration file")
    parser.add_argument("--input", help="trajectory CSV (identify: measurements, validate: reference)")
    parser.add_argument("--method", choices=METHODS, default="uas", help="identification method")
    parser.add_argument("--estimates", help="estimates file for validate (report or ten numbers)")
    parser.add_argument("--seed", type=int, help="override every seed of the configuration")
    parser.add_argument("--out-dir", default=".", help="directory receiving the output files")
    parser.add_argument("--verbose", action="store_true", help="log at debug level")
    return parser


def main(argv=None):
    """
    Parses the command line and runs a command.

    Returns:
        int: 0 on success, 1 on configuration, data or I/O errors. Usage errors exit with 2.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("identify", "validate") and not args.input:
        parser.error(f"{args.command} requires --input")
    if args.command == "validate" and not args.estimates:
        parser.error("validate requires --estimates")

    configure_logging(args.verbose)
    try:
        run = load_run_config(args.config, seed=args.seed)
        if run.verbose and not args.verbose:
            configure_logging(True)
        os.makedirs(args.out_dir, exist_ok=True)
        COMMANDS[args.command](args, run)
    except (FrictionUASError, ValueError, OSError) as err:
        logger.error("%s failed: %s", args.command, err)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
