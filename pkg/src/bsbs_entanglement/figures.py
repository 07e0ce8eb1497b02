"""Figure presets: the heat maps and line cuts of the entanglement study.

Every preset starts from the :class:`SystemParams` defaults (the
reference working point) plus a few fixed overrides, then sweeps the
optical-mechanical logarithmic negativity. Heat maps write
``(axis1, axis2, e_n)`` rows; line cuts write one ``e_n@<value>``
column per curve.
"""

import os
from dataclasses import dataclass, field

from .entanglement import ModePair
from .exceptions import ConfigError
from .lyapunov import RESIDUAL_TOL
from .model import SystemParams
from .sweep import SweepAxis, format_value, run_sweep

__all__ = ["Heatmap", "LineCut", "PRESETS", "FigureData", "compute_figure", "write_figure"]

GRID = 61


@dataclass(frozen=True)
class Heatmap:
    axes: tuple
    fixed: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LineCut:
    axis: tuple
    curve_parameter: str
    curve_values: tuple
    fixed: dict = field(default_factory=dict)


PRESETS = {
    "fig2": Heatmap((("g_coupling_a", 0.0, 0.3), ("delta_a", 0.5, 1.5))),
    "fig3a": Heatmap((("gamma_a", 0.01, 0.6), ("g_coupling_a", 0.0, 0.3)), {"delta_a": 1.0}),
    "fig3b": LineCut(("gamma_a", 0.01, 0.6), "g_coupling_a", (0.15, 0.2, 0.3), {"delta_a": 1.0}),
    "fig4a": Heatmap((("g_coupling_m", 0.0, 0.3), ("g_coupling_a", 0.0, 0.3)), {"delta_a": 1.0}),
    "fig4b": LineCut(("g_coupling_m", 0.0, 0.3), "g_coupling_a", (0.12, 0.15, 0.2), {"delta_a": 1.0}),
    "fig5a": Heatmap(
        (("n_th", 0.0, 250.0), ("g_coupling_m", 0.0, 0.3)),
        {"delta_a": 1.0, "g_coupling_a": 0.2},
    ),
    "fig5b": LineCut(
        ("g_coupling_m", 0.0, 0.3), "n_th", (20.0, 100.0, 200.0),
        {"delta_a": 1.0, "g_coupling_a": 0.2},
    ),
}


@dataclass
class FigureData:
    name: str
    header: list
    rows: list
    records: list  # every SweepRecord behind the rows, in evaluation order

    def to_csv_text(self):
        lines = [",".join(self.header)]
        lines += [",".join(format_value(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"


def _curve_label(value):
    return f"e_n@{value:g}"


def compute_figure(name, overrides=None, grid=GRID, workers=1, pair=ModePair(), tol_residual=RESIDUAL_TOL):
    """Evaluate a preset. ``overrides`` are SystemParams fields applied over the preset."""
    try:
        preset = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown figure preset {name!r}; choose from {', '.join(PRESETS)}") from None
    base = SystemParams(**{**preset.fixed, **(overrides or {})})
    kw = dict(pair=pair, workers=workers, tol_residual=tol_residual)

    if isinstance(preset, Heatmap):
        axes = [SweepAxis(p, lo, hi, grid) for p, lo, hi in preset.axes]
        records = run_sweep(base, axes, **kw)
        header = [ax.parameter for ax in axes] + ["e_n"]
        rows = [list(rec.values) + [rec.e_n] for rec in records]
        return FigureData(name, header, rows, records)

    axis = SweepAxis(*preset.axis, grid)
    columns = []
    records = []
    for value in preset.curve_values:
        curve = run_sweep(base.replace(**{preset.curve_parameter: value}), [axis], **kw)
        records.extend(curve)
        columns.append([rec.e_n for rec in curve])
    header = [axis.parameter] + [_curve_label(v) for v in preset.curve_values]
    rows = [[float(x)] + [col[i] for col in columns] for i, x in enumerate(axis.values)]
    return FigureData(name, header, rows, records)


def _gnuplot_script(fig, csv_name):
    lines = [
        f"# {fig.name}: logarithmic negativity, data in {csv_name}",
        "set datafile separator ','",
        "set datafile missing 'NA'",
        "set terminal pngcairo size 800,600",
        f"set output '{fig.name}.png'",
        f"set xlabel '{fig.header[0]}'",
    ]
    if fig.header[-1] == "e_n" and len(fig.header) == 3:
        lines += [
            f"set ylabel '{fig.header[1]}'",
            "set cblabel 'E_N'",
            "set view map",
            f"plot '{csv_name}' every ::1 using 1:2:3 with image notitle",
        ]
    else:
        lines.append("set ylabel 'E_N'")
        parts = [
            f"'{csv_name}' every ::1 using 1:{i + 2} with lines title '{label}'"
            for i, label in enumerate(fig.header[1:])
        ]
        lines.append("plot " + ", \\\n     ".join(parts))
    return "\n".join(lines) + "\n"


def write_figure(fig, out_dir):
    """Write ``<name>.csv`` and a gnuplot script ``<name>.gp`` into ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{fig.name}.csv")
    gp_path = os.path.join(out_dir, f"{fig.name}.gp")
    with open(csv_path, "w", newline="") as fh:
        fh.write(fig.to_csv_text())
    with open(gp_path, "w") as fh:
        fh.write(_gnuplot_script(fig, os.path.basename(csv_path)))
    return csv_path, gp_path
