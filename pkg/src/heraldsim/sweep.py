"""Parametric (P, F) sweeps over the beam-splitter angle."""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CheckFailed, ZeroTrace
from .formulas import f_formula, maximize_over_theta, p_lossy_formula
from .herald import lossy_herald
from .optics import SetupParams
from .spdc import psi_n

DEFAULT_ETAS = (0.6, 0.7, 0.8, 0.9, 1.0)
DEFAULT_THETA_STEPS = 101
CHECK_TOLERANCE = 1e-10
CSV_HEADER = ("theta", "eta", "p_sim", "p_formula", "f_sim", "f_formula")


@dataclass(frozen=True)
class SweepSpec:
    theta_start: float = 0.0
    theta_stop: float = math.pi / 2
    theta_steps: int = DEFAULT_THETA_STEPS
    etas: Sequence[float] = DEFAULT_ETAS
    n_pairs: int = 3
    out: Path | None = None

    def __post_init__(self):
        if self.theta_steps < 2:
            raise ValueError("need at least two theta points")
        if not 0 <= self.theta_start <= self.theta_stop <= math.pi / 2:
            raise ValueError("theta grid must lie inside [0, pi/2]")
        object.__setattr__(self, "etas", tuple(float(e) for e in self.etas))

    def thetas(self) -> np.ndarray:
        return np.linspace(self.theta_start, self.theta_stop, self.theta_steps)


@dataclass(frozen=True)
class SweepRow:
    theta: float
    eta: float
    p_sim: float
    p_formula: float
    f_sim: float  # NaN where nothing is heralded
    f_formula: float

    def check(self, tol: float = CHECK_TOLERANCE) -> None:
        if abs(self.p_sim - self.p_formula) >= tol:
            raise CheckFailed(f"P mismatch at theta={self.theta}, eta={self.eta}: {self}")
        if not math.isnan(self.f_sim) and abs(self.f_sim - self.f_formula) >= tol:
            raise CheckFailed(f"F mismatch at theta={self.theta}, eta={self.eta}: {self}")


def simulate_point(theta: float, eta: float, n_pairs: int = 3) -> tuple[float, float]:
    """Simulated ``(P, F)`` at symmetric angle ``theta``; F is NaN when P = 0."""
    out = lossy_herald(psi_n(n_pairs), SetupParams(theta, theta), eta)
    try:
        return out.probability, out.fidelity
    except ZeroTrace:
        return out.probability, math.nan


def run_sweep(spec: SweepSpec, check: bool = False) -> list[SweepRow]:
    """Rows ordered theta-major, eta-minor."""
    rows = []
    for theta in spec.thetas():
        theta = float(theta)
        for eta in spec.etas:
            p, f = simulate_point(theta, eta, spec.n_pairs)
            row = SweepRow(theta, eta, p, p_lossy_formula(theta, eta), f, f_formula(theta, eta))
            if check:
                row.check()
            rows.append(row)
    return rows


def curve_maximum(eta: float, n_pairs: int = 3) -> tuple[float, float]:
    """Angle and value of the largest simulated heralding probability at ``eta``."""
    return maximize_over_theta(lambda t: simulate_point(t, eta, n_pairs)[0])


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x + 0.0:.16e}"


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([_fmt(getattr(r, name)) for name in CSV_HEADER])
    return buf.getvalue()


def read_csv(text: str) -> list[SweepRow]:
    reader = csv.DictReader(io.StringIO(text))
    return [SweepRow(*(float(rec[k]) for k in CSV_HEADER)) for rec in reader]


def write_csv(rows: Sequence[SweepRow], path: Path | str) -> None:
    Path(path).write_bytes(rows_to_csv(rows).encode())


def gnuplot_script(csv_path: Path | str, etas: Sequence[float]) -> str:
    """Plot commands for the F-versus-P curves, one per efficiency."""
    plots = ", \\\n     ".join(
        f"'{csv_path}' using ($2=={eta!r} ? $3 : 1/0):5 with lines title 'eta={eta:g}'"
        for eta in etas
    )
    return (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        "set xlabel 'P'\nset ylabel 'F'\n"
        f"plot {plots}\n"
    )
