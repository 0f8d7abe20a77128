import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from ..errors import SeriesConvergenceError
from ..presets import NUSSBAUM_SETUP

NUSSBAUM_KINDS = ("mittag_leffler", "n2", "n3", "n4")

# Largest exponent whose exp is still a finite double
EXP_LIMIT = float(np.log(np.finfo(float).max))


@dataclass(frozen=True)
class NussbaumSpec:
    """
    Selection and tuning of the Nussbaum function that modulates the UAS gain.

    Attributes:
        kind (str): "mittag_leffler", "n2", "n3" or "n4".
        lam (float): Scale lambda > 0 of the Mittag-Leffler argument -lambda k^alpha.
        alpha (float): Mittag-Leffler order; must lie in (2, 3] for the Nussbaum property.
        series_tol (float): Relative term size at which the series is truncated.
        max_terms (int): Largest number of series terms evaluated.
        max_argument (float): Largest |z| the series is trusted with.
    """
    kind: str = NUSSBAUM_SETUP["kind"]
    lam: float = NUSSBAUM_SETUP["lambda"]
    alpha: float = NUSSBAUM_SETUP["alpha"]
    series_tol: float = NUSSBAUM_SETUP["series_tol"]
    max_terms: int = NUSSBAUM_SETUP["max_terms"]
    max_argument: float = NUSSBAUM_SETUP["max_argument"]

    def __post_init__(self):
        if self.kind not in NUSSBAUM_KINDS:
            raise ValueError(f"unknown Nussbaum kind {self.kind!r}, expected one of {NUSSBAUM_KINDS}")
        if not self.lam > 0.0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if self.kind == "mittag_leffler" and not 2.0 < self.alpha <= 3.0:
            raise ValueError(f"alpha must lie in (2, 3] for a Mittag-Leffler Nussbaum function, got {self.alpha}")
        if self.max_terms < 1 or not self.series_tol > 0.0:
            raise ValueError("max_terms must be >= 1 and series_tol positive")


@lru_cache(maxsize=32)
def _log_gamma_table(alpha, beta, max_terms):
    # log Gamma(alpha n + beta) for n = 0 .. max_terms - 1; shared by every call with the same order
    n = np.arange(max_terms)
    table = gammaln(alpha * n + beta)
    table.flags.writeable = False
    return n, table


def mittag_leffler(z, alpha, beta=1.0, series_tol=1e-15, max_terms=400, max_argument=700.0):
    """
    Two-parameter Mittag-Leffler function E_{alpha,beta}(z) of a real argument.

    The power series sum z^n / Gamma(alpha n + beta) is evaluated term by term in
    log space, so Gamma never overflows, and truncated at the first term whose
    magnitude drops below `series_tol` times the partial sum.

    Parameters:
    - z (float): Real argument.
    - alpha (float): Order, > 0.
    - beta (float): Second parameter; 1 for the Nussbaum use.
    - series_tol (float): Relative truncation tolerance.
    - max_terms (int): Term budget.
    - max_argument (float): Refuse |z| above this value instead of returning a cancelled sum.

    Returns:
    - float: E_{alpha,beta}(z).

    Raises:
    - SeriesConvergenceError: If |z| exceeds max_argument or the budget runs out first.
    """
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    z = float(z)
    if not math.isfinite(z) or abs(z) > max_argument:
        raise SeriesConvergenceError(
            f"Mittag-Leffler argument {z:.6g} is outside the reliable series range |z| <= {max_argument:g}")
    if z == 0.0:
        return float(np.exp(-gammaln(beta)))

    n, log_gamma = _log_gamma_table(float(alpha), float(beta), int(max_terms))
    with np.errstate(over="ignore", under="ignore"):
        magnitudes = np.exp(n * math.log(abs(z)) - log_gamma)
    if not np.all(np.isfinite(magnitudes)):
        raise SeriesConvergenceError(f"Mittag-Leffler series terms overflow at z = {z:.6g}")
    terms = magnitudes if z > 0.0 else np.where(n % 2 == 0, magnitudes, -magnitudes)
    partial_sums = np.cumsum(terms)

    # The first term is never small relative to itself, so the search starts at n = 1
    small = magnitudes[1:] <= series_tol * np.abs(partial_sums[1:])
    if not np.any(small):
        raise SeriesConvergenceError(
            f"Mittag-Leffler series did not converge within {max_terms} terms at z = {z:.6g}")
    return float(partial_sums[1 + int(np.argmax(small))])


def nussbaum(spec, k):
    """
    Evaluates the selected Nussbaum function at gain k.

    mittag_leffler: E_alpha(-lambda k^alpha); n2: k cos(sqrt|k|); n3: k^2 cos|k|;
    n4: cos(pi k / 2) exp(k^2).

    Args:
        spec (NussbaumSpec): Function selection.
        k (float): UAS gain, k >= 0.

    Returns:
        float: N(k).

    Raises:
        SeriesConvergenceError: If the Mittag-Leffler series is out of range or N4 overflows.
    """
    if k < 0.0:
        raise ValueError(f"the UAS gain must be non-negative, got {k}")
    if spec.kind == "mittag_leffler":
        return mittag_leffler(-spec.lam * k ** spec.alpha, spec.alpha, 1.0,
                              spec.series_tol, spec.max_terms, spec.max_argument)
    if spec.kind == "n2":
        return k * math.cos(math.sqrt(abs(k)))
    if spec.kind == "n3":
        return k * k * math.cos(abs(k))
    if k * k > EXP_LIMIT:
        raise SeriesConvergenceError(
            f"N4 overflows at gain k = {k:.6g}; exp(k^2) needs k^2 <= {EXP_LIMIT:.6g}")
    return math.cos(math.pi * k / 2.0) * math.exp(k * k)


def running_average(spec, k_grid):
    """
    Running mean (1/k) * integral_0^k N(tau) dtau of a Nussbaum function over a grid.

    The integral uses the trapezoidal rule; the first entry is N(k_grid[0]).

    Args:
        spec (NussbaumSpec): Function selection.
        k_grid (numpy.ndarray): Increasing gains starting at k0.

    Returns:
        numpy.ndarray: Running averages on the grid.
    """
    k_grid = np.asarray(k_grid, dtype=float)
    values = np.array([nussbaum(spec, k) for k in k_grid])
    increments = 0.5 * (values[1:] + values[:-1]) * np.diff(k_grid)
    integral = np.concatenate([[0.0], np.cumsum(increments)])
    span = k_grid - k_grid[0]
    averages = np.empty_like(values)
    averages[0] = values[0]
    averages[1:] = integral[1:] / span[1:]
    return averages
