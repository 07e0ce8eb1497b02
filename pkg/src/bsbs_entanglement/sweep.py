"""Grid evaluation of the pipeline: drift -> stability -> Lyapunov -> E_N."""

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .entanglement import ModePair, extract_pair_covariance, logarithmic_negativity, physicality_check
from .exceptions import ConfigError, ParameterError, SolverError, UnphysicalStateError
from .lyapunov import RESIDUAL_TOL, solve_steady_covariance
from .model import SystemParams, build_diffusion_matrix, build_drift_matrix
from .stability import assess_stability

__all__ = [
    "SWEEPABLE",
    "SweepAxis",
    "SweepRecord",
    "evaluate_point",
    "run_sweep",
    "format_value",
    "write_records_csv",
    "records_to_csv_text",
    "RECORD_COLUMNS",
]

SWEEPABLE = (
    "delta_a",
    "g_coupling_a",
    "g_coupling_m",
    "gamma_a",
    "n_th",
    "kappa",
    "gamma_m",
    "delta_tilde",
)

RECORD_COLUMNS = ("stable", "e_n", "nu_minus", "spectral_abscissa", "residual_norm", "error")

NA = "NA"


@dataclass(frozen=True)
class SweepAxis:
    """Linearly spaced axis over one parameter."""

    parameter: str
    start: float
    stop: float
    count: int = 61

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise ConfigError(f"cannot sweep {self.parameter!r}; choose from {', '.join(SWEEPABLE)}")
        if not self.start < self.stop:
            raise ConfigError(f"axis {self.parameter}: start must be below stop")
        if int(self.count) != self.count or self.count < 2:
            raise ConfigError(f"axis {self.parameter}: count must be an integer >= 2")

    @classmethod
    def parse(cls, text, default_count=61):
        """Parse ``name:start:stop[:count]``."""
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise ConfigError(f"axis must look like name:start:stop[:count], got {text!r}")
        try:
            start, stop = float(parts[1]), float(parts[2])
            count = int(parts[3]) if len(parts) == 4 else default_count
        except ValueError as exc:
            raise ConfigError(f"bad number in axis {text!r}") from exc
        return cls(parts[0].strip(), start, stop, count)

    @property
    def values(self):
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepRecord:
    """Outcome at one grid point. ``e_n`` is None where there is no data."""

    values: tuple
    stable: bool
    e_n: float = None
    nu_minus: float = None
    spectral_abscissa: float = None
    residual_norm: float = None
    error: str = None


def evaluate_point(params, pair=ModePair(), tol_residual=RESIDUAL_TOL, values=()):
    """Run the whole pipeline at one parameter point and return a record.

    Numerical failures are captured in ``record.error`` instead of raised.
    """
    A = build_drift_matrix(params)
    report = assess_stability(A)
    if not report.stable:
        return SweepRecord(
            values, False, spectral_abscissa=report.spectral_abscissa,
            error="marginal" if report.marginal else "unstable",
        )
    D = build_diffusion_matrix(params)
    try:
        solved = solve_steady_covariance(A, D, tol_residual=tol_residual, check_stability=False)
    except SolverError:
        return SweepRecord(values, True, spectral_abscissa=report.spectral_abscissa, error="solver")
    V = solved.covariance
    if not physicality_check(V):
        return SweepRecord(
            values, True, spectral_abscissa=report.spectral_abscissa,
            residual_norm=solved.residual_norm, error="unphysical",
        )
    try:
        ent = logarithmic_negativity(extract_pair_covariance(V, pair))
    except UnphysicalStateError:
        return SweepRecord(
            values, True, spectral_abscissa=report.spectral_abscissa,
            residual_norm=solved.residual_norm, error="unphysical",
        )
    return SweepRecord(
        values, True, ent.log_negativity, ent.nu_minus,
        report.spectral_abscissa, solved.residual_norm,
    )


def _evaluate_task(task):
    base, names, values, pair, tol = task
    try:
        params = base.replace(**dict(zip(names, values)))
    except ParameterError:
        return SweepRecord(values, False, error="invalid-params")
    return evaluate_point(params, pair, tol, values)


def run_sweep(base, axes, pair=ModePair(), workers=1, tol_residual=RESIDUAL_TOL):
    """Evaluate the pipeline on the product grid of one or two axes.

    Records come back in row-major order with the first axis outermost,
    independent of ``workers``.
    """
    axes = list(axes)
    if not 1 <= len(axes) <= 2:
        raise ConfigError("a sweep takes one or two axes")
    names = [ax.parameter for ax in axes]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate sweep parameter in {names}")
    if not isinstance(base, SystemParams):
        raise ConfigError("base must be a SystemParams instance")
    build_drift_matrix(base)  # fail early on unsupported base settings

    grid = itertools.product(*(tuple(float(v) for v in ax.values) for ax in axes))
    tasks = [(base, names, values, pair, tol_residual) for values in grid]
    if workers <= 1:
        return [_evaluate_task(t) for t in tasks]
    chunk = max(1, math.ceil(len(tasks) / (4 * workers)))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate_task, tasks, chunksize=chunk))


def format_value(value):
    """17-significant-digit scientific notation; ``NA`` for missing data."""
    if value is None:
        return NA
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    return f"{value:.16e}"


def write_records_csv(records, axis_names, stream):
    """Write records with the full record schema to a text stream."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow([*axis_names, *RECORD_COLUMNS])
    for rec in records:
        writer.writerow(
            [format_value(v) for v in rec.values]
            + [
                format_value(rec.stable),
                format_value(rec.e_n),
                format_value(rec.nu_minus),
                format_value(rec.spectral_abscissa),
                format_value(rec.residual_norm),
                format_value(rec.error),
            ]
        )


def records_to_csv_text(records, axis_names):
    buf = io.StringIO()
    write_records_csv(records, axis_names, buf)
    return buf.getvalue()
