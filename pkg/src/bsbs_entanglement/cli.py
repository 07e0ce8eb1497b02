"""Command-line front end.

Subcommands::

    bsbs-entanglement point  [options]
    bsbs-entanglement sweep  --axis NAME:START:STOP[:COUNT] [--axis ...] [options]
    bsbs-entanglement figure NAME [options]

Parameters come from the built-in defaults, then an optional flat
``key = value`` config file, then ``--<parameter>`` flags. Exit status
is 0 on success, 1 for usage or configuration errors and 2 for
numerical failures or an unstable working point.
"""

import argparse
import os
import sys
from dataclasses import dataclass, field

from .entanglement import ModePair, extract_pair_covariance, logarithmic_negativity, physicality_check
from .exceptions import (
    ConfigError,
    DivergenceError,
    NumericalError,
    ParameterError,
    SolverError,
    UnphysicalStateError,
    UnsupportedFeatureError,
)
from .figures import GRID, PRESETS, compute_figure, write_figure
from .lyapunov import RESIDUAL_TOL, solve_steady_covariance
from .model import SystemParams, build_diffusion_matrix, build_drift_matrix
from .stability import assess_stability
from .sweep import SweepAxis, evaluate_point, run_sweep, write_records_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

WORKERS_ENV = "BSBS_WORKERS"

PARAM_FIELDS = SystemParams.field_names()
RUN_KEYS = ("pair", "workers", "out", "tol_residual", "grid", "axis1", "axis2")


@dataclass
class RunConfig:
    params: dict = field(default_factory=dict)
    axes: list = field(default_factory=list)
    pair: ModePair = field(default_factory=ModePair)
    out: str = None
    workers: int = 1
    tol_residual: float = RESIDUAL_TOL
    grid: int = GRID

    def system_params(self):
        return SystemParams(**self.params)


def parse_config_text(text):
    """Parse flat ``key = value`` text; ``#`` starts a comment. Unknown keys are rejected."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in PARAM_FIELDS and key not in RUN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value
    return entries


def _float(key, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key}: not a number: {text!r}") from None


def _int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key}: not an integer: {text!r}") from None


def build_config(args, environ=os.environ):
    """Merge defaults, environment, config file and command-line flags."""
    cfg = RunConfig()
    if environ.get(WORKERS_ENV):
        cfg.workers = _int(WORKERS_ENV, environ[WORKERS_ENV])

    entries = {}
    if args.config:
        try:
            with open(args.config) as fh:
                entries = parse_config_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc

    for key in PARAM_FIELDS:
        if key in entries:
            cfg.params[key] = _float(key, entries[key])
        flag = getattr(args, key, None)
        if flag is not None:
            cfg.params[key] = flag
    if "pair" in entries:
        cfg.pair = _pair(entries["pair"])
    if "workers" in entries:
        cfg.workers = _int("workers", entries["workers"])
    if "out" in entries:
        cfg.out = entries["out"]
    if "tol_residual" in entries:
        cfg.tol_residual = _float("tol_residual", entries["tol_residual"])
    if "grid" in entries:
        cfg.grid = _int("grid", entries["grid"])

    if args.pair is not None:
        cfg.pair = _pair(args.pair)
    if args.workers is not None:
        cfg.workers = args.workers
    if args.out is not None:
        cfg.out = args.out
    if args.tol_residual is not None:
        cfg.tol_residual = args.tol_residual
    if args.grid is not None:
        cfg.grid = args.grid

    if cfg.workers < 1:
        raise ConfigError("workers must be at least 1")
    if cfg.grid < 2:
        raise ConfigError("grid must be at least 2")
    if not cfg.tol_residual > 0:
        raise ConfigError("tol_residual must be positive")

    axis_texts = [entries[k] for k in ("axis1", "axis2") if k in entries]
    if getattr(args, "axis", None):
        axis_texts = args.axis
    cfg.axes = [SweepAxis.parse(t, default_count=cfg.grid) for t in axis_texts]

    try:
        cfg.system_params()
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def _pair(text):
    try:
        return ModePair.parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _fmt(x):
    return f"{x:.10g}"


def cmd_point(cfg, stdout=None):
    stdout = stdout or sys.stdout
    params = cfg.system_params()
    A = build_drift_matrix(params)
    report = assess_stability(A)
    print(f"pair: {cfg.pair}", file=stdout)
    print(f"stable: {'true' if report.stable else 'false'}", file=stdout)
    if report.marginal:
        print("marginal: true", file=stdout)
    print(f"spectral_abscissa: {_fmt(report.spectral_abscissa)}", file=stdout)
    eig = ", ".join(f"{z.real:.6g}{z.imag:+.6g}j" for z in report.eigenvalues)
    print(f"eigenvalues: {eig}", file=stdout)
    if not report.stable:
        print("no steady state: drift matrix is not Hurwitz stable", file=stdout)
        return EXIT_NUMERICAL

    solved = solve_steady_covariance(A, build_diffusion_matrix(params), cfg.tol_residual, check_stability=False)
    ent = logarithmic_negativity(extract_pair_covariance(solved.covariance, cfg.pair))
    print(f"lyapunov_residual: {solved.residual_norm:.3e}", file=stdout)
    print(f"physical: {'true' if physicality_check(solved.covariance) else 'false'}", file=stdout)
    print(f"nu_minus: {_fmt(ent.nu_minus)}", file=stdout)
    print(f"log_negativity: {_fmt(ent.log_negativity)}", file=stdout)
    print(f"entangled: {'true' if ent.entangled else 'false'}", file=stdout)

    if cfg.out:
        record = evaluate_point(params, cfg.pair, cfg.tol_residual)
        with open(cfg.out, "w", newline="") as fh:
            write_records_csv([record], [], fh)
    return EXIT_OK


def cmd_sweep(cfg, stdout=None):
    stdout = stdout or sys.stdout
    if not 1 <= len(cfg.axes) <= 2:
        raise ConfigError("sweep needs one or two --axis NAME:START:STOP[:COUNT] options")
    records = run_sweep(cfg.system_params(), cfg.axes, cfg.pair, cfg.workers, cfg.tol_residual)
    names = [ax.parameter for ax in cfg.axes]
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            write_records_csv(records, names, fh)
        print(f"wrote {len(records)} records to {cfg.out}", file=stdout)
    else:
        write_records_csv(records, names, stdout)
    return EXIT_OK


def cmd_figure(name, cfg, stdout=None):
    stdout = stdout or sys.stdout
    fig = compute_figure(name, cfg.params, cfg.grid, cfg.workers, cfg.pair, cfg.tol_residual)
    csv_path, gp_path = write_figure(fig, cfg.out or ".")
    print(f"wrote {csv_path} and {gp_path}", file=stdout)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key = value configuration file")
    common.add_argument("--out", metavar="PATH", help="output file (point, sweep) or directory (figure)")
    common.add_argument("--workers", type=int, help=f"worker processes (default ${WORKERS_ENV} or 1)")
    common.add_argument(
        "--pair", help="optical-mechanical (default), optical-acoustic or acoustic-mechanical"
    )
    common.add_argument("--tol-residual", type=float, help="maximum relative Lyapunov residual")
    common.add_argument("--grid", type=int, help="points per axis (default 61)")
    params = common.add_argument_group("model parameters (units of omega_m)")
    for name in PARAM_FIELDS:
        params.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float, metavar="X")

    parser = _Parser(prog="bsbs-entanglement", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("point", parents=[common], help="evaluate a single parameter point")
    sweep = sub.add_parser("sweep", parents=[common], help="sweep one or two parameters to CSV")
    sweep.add_argument("--axis", action="append", metavar="NAME:START:STOP[:COUNT]")
    fig = sub.add_parser("figure", parents=[common], help="compute a figure preset")
    fig.add_argument("name", help=", ".join(PRESETS))
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "point":
            return cmd_point(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        return cmd_figure(args.name, cfg)
    except (ConfigError, UnsupportedFeatureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, NumericalError, UnphysicalStateError, DivergenceError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
