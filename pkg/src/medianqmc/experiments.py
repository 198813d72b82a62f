"""Error-vs-n experiments: replicated expected-error estimation and rate fits.

The expected absolute error at budget n is estimated by averaging
|I(f) - M_n(f)| over R independent realizations of the median rule; the
empirical convergence rate is the least-squares slope of log(error) against
log(n), restricted to rows above the error floor and at or beyond the
regression cutoff.  Output is a CSV table (plus a JSON sidecar carrying the
full configuration for replay); both are byte-stable across reruns and
worker counts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, DomainError, InsufficientDataError
from .integrands import TestFunctionSpec, make_integrand
from .lattice import Integrand
from .median_rule import (HChoice, MedianRuleConfig, integrate_median,
                          tent_transform)
from .primes import derive_seed

__all__ = [
    "ExperimentConfig",
    "RateRow",
    "RateTable",
    "default_n_grid",
    "estimate_expected_error",
    "fit_rate",
    "run_convergence",
]

# Salt separating realization sub-seeds from replicate streams.
_REALIZATION_SALT = 0x5851F42D4C957F2D


def default_n_grid(max_n: int = 10 ** 5, points: int = 16) -> tuple[int, ...]:
    """Default experiment grid: log-spaced from 10 to max_n.

    Runs at d = 50 should cap max_n at 10^4 to stay desk-scale.
    """
    return tuple(sorted({int(round(v)) for v in np.geomspace(10.0, max_n, points)}))


def realization_seed(master_seed: int, realization: int) -> int:
    """Sub-seed for realization r; its replicates then use streams (sub, k)."""
    return derive_seed(master_seed, realization, salt=_REALIZATION_SALT)


@dataclass(frozen=True)
class ExperimentConfig:
    """One convergence experiment: function, grid, realization count, seeds."""

    spec: TestFunctionSpec
    n_grid: tuple[int, ...]
    realizations: int
    master_seed: int
    tent: bool = False
    h_choice: HChoice = field(default_factory=HChoice.loglog)
    error_floor: float = 1e-13
    regression_min_n: float = 10.0

    def __post_init__(self):
        grid = tuple(int(n) for n in self.n_grid)
        object.__setattr__(self, "n_grid", grid)
        if not grid:
            raise DomainError("n_grid must be nonempty")
        if any(n < 2 for n in grid):
            raise DomainError("every grid n must be >= 2")
        if any(b <= a for a, b in zip(grid[:-1], grid[1:])):
            raise DomainError("n_grid must be strictly ascending")
        if self.realizations < 1:
            raise DomainError("need at least one realization")

    def to_dict(self) -> dict:
        spec = self.spec
        return {
            "fn": spec.kind,
            "d": spec.d,
            "c1": spec.c1,
            "c2": spec.c2,
            "a": spec.a,
            "c": spec.c,
            "theta": spec.theta,
            "grid": list(self.n_grid),
            "realizations": self.realizations,
            "seed": self.master_seed,
            "tent": self.tent,
            "h": str(self.h_choice),
            "error_floor": self.error_floor,
            "regression_min_n": self.regression_min_n,
        }


@dataclass(frozen=True)
class RateRow:
    n: int
    n_replicates: int
    mean_abs_error: float
    total_evals: int


@dataclass(frozen=True)
class RateTable:
    """Grid rows plus the fitted log-log slope and the rows actually used."""

    rows: tuple[RateRow, ...]
    slope: Optional[float]
    intercept: Optional[float]
    regression_ns: tuple[int, ...]

    def to_csv(self) -> str:
        lines = ["n,N_replicates,mean_abs_error,total_evals"]
        for row in self.rows:
            lines.append(f"{row.n},{row.n_replicates},{row.mean_abs_error!r},{row.total_evals}")
        if self.slope is None:
            lines.append("# slope insufficient-data")
            lines.append("# intercept insufficient-data")
        else:
            lines.append(f"# slope {self.slope!r}")
            lines.append(f"# intercept {self.intercept!r}")
        used = ",".join(str(n) for n in self.regression_ns)
        lines.append(f"# regression_rows {used if used else 'none'}")
        lines.append("# total_evals column sums lattice evaluations over all realizations of the row")
        return "\n".join(lines) + "\n"


def _realization_error(f: Integrand, n: int, h_choice: HChoice, sub_seed: int,
                       workers: int) -> tuple[float, int, int]:
    cfg = MedianRuleConfig(n=n, d=f.dim, master_seed=sub_seed, h_choice=h_choice)
    trace = integrate_median(f, cfg, workers=workers)
    err = abs(complex(f.true_integral) - trace.final)
    return err, len(trace.replicates), trace.total_evals


def _row_stats(f: Integrand, n: int, realizations: int, h_choice: HChoice,
               master_seed: int, workers: int) -> tuple[float, int, int]:
    errors = []
    totals = 0
    n_rep = 0
    for r in range(1, realizations + 1):
        err, n_rep, evals = _realization_error(
            f, n, h_choice, realization_seed(master_seed, r), workers)
        errors.append(err)
        totals += evals
    return math.fsum(errors) / realizations, n_rep, totals


def estimate_expected_error(f: Integrand, n: int, realizations: int, tent: bool,
                            h_choice: HChoice, master_seed: int,
                            workers: int = 1) -> float:
    """Mean of |I(f) - M_n(f)| over R independent realizations.

    Realization r runs the median rule under the derived sub-seed
    (master_seed, r); the result is a deterministic function of the inputs.
    """
    if f.true_integral is None:
        raise ConfigError("expected-error estimation needs a known true integral")
    if realizations < 1:
        raise DomainError("need at least one realization")
    g = tent_transform(f) if tent else f
    mean_err, _, _ = _row_stats(g, n, realizations, h_choice, master_seed, workers)
    return mean_err


def fit_rate(rows: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Least squares of log(error) on log(n); the slope is the empirical -rate."""
    usable = [(n, e) for n, e in rows if e > 0.0]
    if len(usable) < 2:
        raise InsufficientDataError(
            f"rate regression needs >= 2 rows with positive error, got {len(usable)}")
    log_n = np.log([n for n, _ in usable])
    log_e = np.log([e for _, e in usable])
    slope, intercept = np.polyfit(log_n, log_e, 1)
    return float(slope), float(intercept)


def run_convergence(config: ExperimentConfig, workers: int = 1) -> RateTable:
    """Fill the error table over the grid, fit the rate, return the table."""
    f = make_integrand(config.spec)
    if f.true_integral is None:
        raise ConfigError("convergence experiments need a known true integral")
    g = tent_transform(f) if config.tent else f
    rows: list[RateRow] = []
    for n in config.n_grid:
        mean_err, n_rep, totals = _row_stats(
            g, n, config.realizations, config.h_choice, config.master_seed, workers)
        rows.append(RateRow(n=n, n_replicates=n_rep,
                            mean_abs_error=mean_err, total_evals=totals))
    fit_rows = [(row.n, row.mean_abs_error) for row in rows
                if row.n >= config.regression_min_n
                and row.mean_abs_error > config.error_floor]
    try:
        slope, intercept = fit_rate(fit_rows)
    except InsufficientDataError:
        slope = intercept = None
    return RateTable(rows=tuple(rows), slope=slope, intercept=intercept,
                     regression_ns=tuple(n for n, _ in fit_rows))


def write_outputs(table: RateTable, config: ExperimentConfig, csv_path: str) -> None:
    """Write the CSV and the JSON config sidecar (<csv_path>.json)."""
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(table.to_csv())
    sidecar = json.dumps(config.to_dict(), sort_keys=True, indent=2) + "\n"
    with open(csv_path + ".json", "w", encoding="utf-8") as fh:
        fh.write(sidecar)
