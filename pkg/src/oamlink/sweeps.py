"""Parameter sweeps and the figure-reproduction grids, written as CSV.

Each grid point is evaluated independently (optionally in worker
processes) and rows are written in grid order, so the output does not
depend on the degree of parallelism. Floats use 17 significant digits.
"""

from __future__ import annotations

import io
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError, IoError, ValidationError
from .link import LinkReport
from .optimizer import optimize_interval
from .pipeline import evaluate
from .scenario import Scenario

__all__ = [
    "Column",
    "SweepSpec",
    "FIGURES",
    "figure_sweep",
    "apply_parameter",
    "compute_rows",
    "format_csv",
    "run_sweep",
]

DEFLECTION_DB = "misalignment.deflection_db"

_INT_FIELDS = {"array.num_antennas", "states.count", "states.interval", "states.base_state",
               "beam.reference_state", "purity.halfwidth", "optimizer.max_interval"}


@dataclass(frozen=True)
class Column:
    """One output column: a report metric under optional scenario overrides."""

    name: str
    metric: str = "total_capacity"
    overrides: tuple[tuple[str, float], ...] = ()
    aligned: bool = False


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    grid: tuple[float, ...]
    outputs: tuple[Column, ...]
    optimize: bool = False  # append Algorithm-1 columns from the interval sweep

    def __post_init__(self):
        if not self.grid:
            raise DomainError("sweep grid must be non-empty")
        d = np.diff(self.grid)
        if len(d) and not (np.all(d > 0) or np.all(d < 0)):
            raise DomainError("sweep grid must be strictly monotone")
        if not self.outputs:
            raise DomainError("sweep needs at least one output")

    def header(self) -> list[str]:
        name = self.parameter.rpartition(".")[2]
        cols = [name] + [c.name for c in self.outputs]
        if self.optimize:
            cols += ["optimal_interval", "optimal_capacity",
                     "improvement_over_o1", "improvement_over_omax"]
        return cols


def apply_parameter(scn: Scenario, name: str, value: float) -> Scenario:
    if name == DEFLECTION_DB:
        return scn.with_deflection_db(value)
    if name in _INT_FIELDS:
        if float(value) != int(value):
            raise ValidationError(f"{name} must be an integer, got {value}")
        value = int(value)
    return scn.replace(name, value)


def _metric(report: LinkReport, metric: str) -> float:
    if metric.startswith("capacity_rx"):
        j = int(metric[len("capacity_rx"):])
        return float(report.per_antenna_capacity[j - 1])
    if metric not in ("total_capacity", "error_probability", "symbol_error", "pep"):
        raise DomainError(f"unknown metric {metric!r}")
    return float(getattr(report, metric))


def _point(args) -> list[float]:
    scn, spec, value = args
    base = apply_parameter(scn, spec.parameter, value)
    row = [float(value)]
    for col in spec.outputs:
        s = base
        for name, v in col.overrides:
            s = apply_parameter(s, name, v)
        if col.aligned:
            s = s.aligned()
        row.append(_metric(evaluate(s), col.metric))
    if spec.optimize:
        caps = {}
        for col, v in zip(spec.outputs, row[1:]):
            for name, o in col.overrides:
                if name == "states.interval":
                    caps[int(o)] = v
        o_max = max(caps)
        res = optimize_interval(o_max=o_max, tie_break=scn.optimizer.tie_break,
                                capacities=caps)
        row += [float(res.optimal_interval), res.optimal_capacity,
                res.improvement_over(1), res.improvement_over(o_max)]
    return row


def compute_rows(scn: Scenario, spec: SweepSpec, threads: int = 1) -> list[list[float]]:
    tasks = [(scn, spec, v) for v in spec.grid]
    if threads <= 1 or len(tasks) == 1:
        return [_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(threads, len(tasks))) as pool:
        return list(pool.map(_point, tasks))


def _fmt(x: float) -> str:
    return "%.17g" % x


def format_csv(header: Sequence[str], rows: Sequence[Sequence[float]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_text(text: str, out: str | Path | None) -> None:
    """Write atomically to ``out`` (stdout when None)."""
    if out is None:
        sys.stdout.write(text)
        return
    out = Path(out)
    tmp = None
    try:
        fd, tmp = tempfile.mkstemp(prefix=".oamlink-", suffix=".csv", dir=out.parent or ".")
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except OSError as exc:
        if tmp and os.path.exists(tmp):
            os.unlink(tmp)
        raise IoError(f"cannot write {out}: {exc}") from exc


def run_sweep(scn: Scenario, spec: SweepSpec, out: str | Path | None,
              threads: int = 1) -> list[list[float]]:
    """Evaluate every grid point and write one CSV row per point.

    Nothing is written if any point fails.
    """
    rows = compute_rows(scn, spec, threads)
    write_text(format_csv(spec.header(), rows), out)
    return rows


# figure grids

SNR_GRID = tuple(float(x) for x in range(0, 21))
DEFLECTION_GRID = tuple(float(x) for x in range(-40, -4))
ALPHA_GRID = tuple(float(a) for a in np.round(np.linspace(3.01, 3.9, 10), 10))
CN2_GRID = tuple(float(c) for c in np.logspace(-13, -11, 9))
DISTANCES = (30.0, 50.0, 100.0)
FIG8_DEFLECTIONS = (-24.0, -13.0, -8.0, -5.0)
FIG9_INTERVALS = (1, 2, 3, 4)


def _num(x: float) -> str:
    return ("%g" % x).replace("-", "m").replace(".", "p")


def _fig(name: str, scn: Scenario) -> SweepSpec:
    o_max = scn.optimizer.max_interval
    if name == "fig3":
        return SweepSpec("link.snr_db", SNR_GRID, (
            Column("capacity_aligned", aligned=True),
            Column("capacity_misaligned")))
    if name == "fig4a":
        return SweepSpec("turbulence.spectral_index", ALPHA_GRID, tuple(
            Column(f"capacity_z{_num(z)}", overrides=(("array.link_distance", z),))
            for z in DISTANCES))
    if name == "fig4b":
        return SweepSpec("turbulence.structure_constant", CN2_GRID, tuple(
            Column(f"capacity_z{_num(z)}", overrides=(("array.link_distance", z),))
            for z in DISTANCES))
    if name == "fig5":
        return SweepSpec(DEFLECTION_DB, DEFLECTION_GRID, tuple(
            Column(f"capacity_L{L}", overrides=(("states.count", L),)) for L in (2, 4, 6, 8)))
    if name == "fig6":
        return SweepSpec(DEFLECTION_DB, DEFLECTION_GRID, tuple(
            Column(f"capacity_N{n}", overrides=(("array.num_antennas", n),)) for n in (2, 4, 6, 8)))
    if name == "fig7":
        return SweepSpec(DEFLECTION_DB, DEFLECTION_GRID, tuple(
            Column(f"capacity_o{o}", overrides=(("states.interval", o),))
            for o in range(1, o_max + 1)), optimize=True)
    if name == "fig8":
        return SweepSpec("link.snr_db", SNR_GRID, tuple(
            Column(f"error_probability_db{_num(d)}", "error_probability",
                   ((DEFLECTION_DB, d),)) for d in FIG8_DEFLECTIONS))
    if name == "fig9":
        return SweepSpec("link.snr_db", SNR_GRID, tuple(
            Column(f"error_probability_o{o}", "error_probability",
                   (("states.interval", o),)) for o in FIG9_INTERVALS))
    raise DomainError(f"unknown figure {name!r}")


FIGURES = ("fig3", "fig4a", "fig4b", "fig5", "fig6", "fig7", "fig8", "fig9")


def figure_sweep(name: str, scn: Scenario | None = None) -> SweepSpec:
    return _fig(name, scn or Scenario())
