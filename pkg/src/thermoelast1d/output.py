"""Result persistence: diagnostics CSV, field snapshots, plot emission.

All float formatting uses %.17g, which round-trips IEEE double exactly;
column order is fixed (documented in FORMATS.md) so diffs across runs and
versions stay meaningful.  Writes are bit-stable across reruns.
"""

from __future__ import annotations

import json
import os
from typing import Dict, Sequence

import numpy as np

from .errors import ContractError, Thermoelast1dError
from .state import Trajectory

DIAG_COLUMNS = (
    "t",
    "E",
    "int_Theta",
    "theta_min",
    "theta_max",
    "y",
    "y_valid",
    "thetax_l2sq",
    "thetaxx_l2sq",
    "vx_l2sq",
    "vxx_l2sq",
    "uxx_l2sq",
    "diss_thetax",
    "diss_eps",
)

_G = "%.17g"


def _fmt(x) -> str:
    return _G % float(x)


def _record_row(r) -> list:
    return [
        r.t,
        r.energy,
        r.theta_mass,
        r.theta_min,
        r.theta_max,
        float("nan") if r.hfunc is None else r.hfunc,
        1 if r.hfunc_valid else 0,
        r.thetax_l2sq,
        r.thetaxx_l2sq,
        r.vx_l2sq,
        r.vxx_l2sq,
        r.uxx_l2sq,
        r.dissipation_accum,
        r.eps_dissipation_accum,
    ]


def export_trajectory(traj: Trajectory, directory, formats: Sequence[str] = ("csv",)):
    """Write per-step diagnostics plus field snapshots.

    csv:        diagnostics.csv + one snapshot_NNNNNN.csv per recorded time
    json_lines: diagnostics.csv + snapshots.jsonl (streamable, one snapshot
                per line)

    Returns the list of written paths.
    """
    for f in formats:
        if f not in ("csv", "json_lines"):
            raise ContractError(f"unknown export format {f!r}")
    os.makedirs(directory, exist_ok=True)
    written = []

    diag_path = os.path.join(directory, "diagnostics.csv")
    try:
        with open(diag_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(DIAG_COLUMNS) + "\n")
            for r in traj.records:
                fh.write(",".join(_fmt(x) for x in _record_row(r)) + "\n")
    except OSError as exc:
        raise Thermoelast1dError(f"failed writing {diag_path}: {exc}") from exc
    written.append(diag_path)

    x = traj.grid.nodes
    if "csv" in formats:
        for idx, s in enumerate(traj.states):
            path = os.path.join(directory, f"snapshot_{idx:06d}.csv")
            try:
                with open(path, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write("t,x,v,u,theta\n")
                    for j in range(len(x)):
                        fh.write(
                            ",".join(
                                _fmt(val)
                                for val in (
                                    s.t, x[j], s.v.values[j], s.u.values[j],
                                    s.theta.values[j],
                                )
                            )
                            + "\n"
                        )
            except OSError as exc:
                raise Thermoelast1dError(f"failed writing {path}: {exc}") from exc
            written.append(path)
    if "json_lines" in formats:
        path = os.path.join(directory, "snapshots.jsonl")
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                for s in traj.states:
                    fh.write(
                        json.dumps(
                            {
                                "t": s.t,
                                "v": s.v.values.tolist(),
                                "u": s.u.values.tolist(),
                                "theta": s.theta.values.tolist(),
                            }
                        )
                        + "\n"
                    )
        except OSError as exc:
            raise Thermoelast1dError(f"failed writing {path}: {exc}") from exc
        written.append(path)
    return written


def read_snapshot_csv(path) -> Dict[str, np.ndarray]:
    """Read back one snapshot file (exact values, for round-trip checks)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    cols = {name: np.array([float(r[i]) for r in rows]) for i, name in enumerate(header)}
    return cols


def read_diagnostics_csv(path) -> Dict[str, np.ndarray]:
    return read_snapshot_csv(path)


# ---------------------------------------------------------------------------
# plot emission (data + script, or standalone SVG; no graphics deps)
# ---------------------------------------------------------------------------


def write_gnuplot(traj: Trajectory, directory) -> list:
    """Emit series.dat plus a gnuplot script rendering the main series."""
    os.makedirs(directory, exist_ok=True)
    dat = os.path.join(directory, "series.dat")
    with open(dat, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# " + " ".join(DIAG_COLUMNS) + "\n")
        for r in traj.records:
            fh.write(" ".join(_fmt(x) for x in _record_row(r)) + "\n")
    gp = os.path.join(directory, "plot.gp")
    with open(gp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            "set terminal svg size 900,600\n"
            "set output 'series.svg'\n"
            "set xlabel 't'\n"
            "set key outside\n"
            "plot 'series.dat' using 1:2 with lines title 'E', \\\n"
            "     'series.dat' using 1:3 with lines title 'int Theta', \\\n"
            "     'series.dat' using 1:4 with lines title 'min Theta', \\\n"
            "     'series.dat' using 1:5 with lines title 'max Theta'\n"
        )
    return [dat, gp]


def write_svg_series(series: Dict[str, np.ndarray], t: np.ndarray, path,
                     width: int = 900, height: int = 600) -> str:
    """Standalone SVG line plot of named series against t (no dependencies)."""
    t = np.asarray(t, float)
    margin = 50.0
    finite_vals = np.concatenate(
        [np.asarray(v, float)[np.isfinite(np.asarray(v, float))] for v in series.values()]
    )
    if finite_vals.size == 0:
        finite_vals = np.array([0.0, 1.0])
    ymin, ymax = float(finite_vals.min()), float(finite_vals.max())
    if ymax - ymin < 1e-300:
        ymax = ymin + 1.0
    tmin, tmax = float(t.min()), float(t.max())
    if tmax - tmin < 1e-300:
        tmax = tmin + 1.0

    def sx(tv):
        return margin + (tv - tmin) / (tmax - tmin) * (width - 2 * margin)

    def sy(yv):
        return height - margin - (yv - ymin) / (ymax - ymin) * (height - 2 * margin)

    colors = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        f'stroke="black"/>',
        f'<text x="{margin}" y="20" font-size="13">t in [{tmin:.6g}, {tmax:.6g}], '
        f'range [{ymin:.6g}, {ymax:.6g}]</text>',
    ]
    for i, (name, vals) in enumerate(series.items()):
        vals = np.asarray(vals, float)
        pts = " ".join(
            f"{sx(tv):.2f},{sy(yv):.2f}"
            for tv, yv in zip(t, vals)
            if np.isfinite(yv)
        )
        color = colors[i % len(colors)]
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'
        )
        parts.append(
            f'<text x="{width - margin + 4}" y="{margin + 16 * i}" font-size="12" '
            f'fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
    return str(path)


def write_report(report, directory) -> list:
    """Persist an experiment report: verdict.txt plus one CSV per series."""
    os.makedirs(directory, exist_ok=True)
    written = []
    verdict = os.path.join(directory, "verdict.txt")
    with open(verdict, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report.summary() + "\n")
        fh.write(f"params: {json.dumps(report.params, default=str, sort_keys=True)}\n")
    written.append(verdict)
    for name, table in report.series.items():
        path = os.path.join(directory, f"series_{name}.csv")
        cols = list(table.keys())
        n = max((len(np.atleast_1d(table[c])) for c in cols), default=0)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(cols) + "\n")
            for i in range(n):
                row = []
                for c in cols:
                    arr = np.atleast_1d(table[c])
                    row.append(_fmt(arr[i]) if i < len(arr) else "")
                fh.write(",".join(row) + "\n")
        written.append(path)
    return written
