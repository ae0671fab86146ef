"""Rendering trajectory exports to PNG and SVG figures.

Input is the file interface of the njc simulator: a CSV with a time grid
and one or two population columns, plus a JSON sidecar holding the model
parameters. Nothing here imports the simulator; envelopes are recomputed
from the sidecar parameters alone, and a tripwire compares them against
the minima of the plotted curve so that a stale or mislabeled sidecar
aborts the render instead of producing a wrong figure.
"""

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .csvio import TrajectoryTable, read_trajectory, require_params
from .errors import EnvelopeMismatch, MalformedCsv
# Largest tolerated gap between a curve minimum and the recomputed
# envelope. The coarsest grids the simulator writes (dt = 0.5) leave the
# oscillatory term up to ~6e-4 at the sampled minimum, so 1e-3 passes
# honest data and catches a wrong parameter set or a stale sidecar.
ENVELOPE_TOLERANCE = 1e-3


def _style() -> dict:
    text = resources.files("njc_plots").joinpath("style.json").read_text("utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class PlotSpec:
    """One figure: which files to draw and how."""

    sources: tuple
    output: Path
    overlay: bool = True
    envelopes: bool = False
    title: str = ""
    xlabel: str = "t (units of 1/omega)"
    ylabel: str = "excited-state population"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "sources", tuple(Path(s) for s in self.sources)
        )
        object.__setattr__(self, "output", Path(self.output))
        if not self.sources:
            raise MalformedCsv("no input files given")


def envelope_floor(params: dict, times: np.ndarray) -> np.ndarray:
    """Lower envelope of the damped oscillation for the given parameters.

    The two dressed populations decay at gamma/4 in amplitude; their
    difference squared is the floor the oscillatory term touches. With
    c = chi / sqrt(g^2 + chi^2):

        floor(t) = ( (1+c)/2 exp(-gamma_plus t/4)
                   - (1-c)/2 exp(-gamma_minus t/4) )^2
    """
    t = np.asarray(times, dtype=float)
    c = params["chi"] / float(np.hypot(params["g"], params["chi"]))
    upper = 0.5 * (1.0 + c) * np.exp(-params["gamma_plus"] * t / 4.0)
    lower = 0.5 * (1.0 - c) * np.exp(-params["gamma_minus"] * t / 4.0)
    return (upper - lower) ** 2


def _grid_minima(times: np.ndarray, values: np.ndarray) -> list:
    """Interior local minima, refined by a three-point parabola."""
    out = []
    for i in range(1, len(values) - 1):
        if values[i] < values[i - 1] and values[i] < values[i + 1]:
            x0, x1, x2 = times[i - 1 : i + 2]
            y0, y1, y2 = values[i - 1 : i + 2]
            denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
            a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
            b = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / denom
            if a > 0.0:
                xv = -b / (2.0 * a)
                if x0 < xv < x2:
                    c = (
                        x1 * x2 * (x1 - x2) * y0
                        + x2 * x0 * (x2 - x0) * y1
                        + x0 * x1 * (x0 - x1) * y2
                    ) / denom
                    out.append((xv, a * xv * xv + b * xv + c))
                    continue
            out.append((times[i], y1))
    return out


def check_envelope(table: TrajectoryTable, params: dict) -> float:
    """Worst |minimum - envelope| over the curve's interior minima.

    Raises EnvelopeMismatch beyond ENVELOPE_TOLERANCE; a silent mismatch
    would mean the drawn floor belongs to different data.
    """
    _, values = table.curve()
    worst = 0.0
    worst_at = None
    for t_min, v_min in _grid_minima(table.times, values):
        gap = abs(v_min - float(envelope_floor(params, t_min)))
        if gap > worst:
            worst, worst_at = gap, t_min
    if worst > ENVELOPE_TOLERANCE:
        raise EnvelopeMismatch(
            f"{table.source}: curve minimum at t={worst_at:.6g} is "
            f"{worst:.3e} away from the envelope recomputed from the "
            f"sidecar (tolerance {ENVELOPE_TOLERANCE:g}); the sidecar "
            "parameters do not describe this data"
        )
    return worst


def render(spec: PlotSpec) -> tuple[Path, Path]:
    """Draw the figure and write deterministic PNG and SVG files."""
    style = _style()
    tables = [read_trajectory(src) for src in spec.sources]

    with plt.rc_context({"svg.hashsalt": "njc-plots"}):
        fig, ax = plt.subplots(
            figsize=(style["figure_width"], style["figure_height"]),
            dpi=style["dpi"],
        )
        many = len(tables) > 1
        for table in tables:
            name, values = table.curve()
            label = table.label if many else name
            ax.plot(
                table.times,
                values,
                color=None if many else style["color_analytic"],
                linewidth=style["linewidth_curve"],
                label=label,
            )
            if spec.overlay and name == "pe_analytic" and "pe_numeric" in table.columns:
                ax.plot(
                    table.times,
                    table.columns["pe_numeric"],
                    color=style["color_numeric"],
                    linewidth=style["linewidth_curve"],
                    linestyle=style["numeric_linestyle"],
                    label=f"{table.label} (numeric)" if many else "pe_numeric",
                )
            if spec.envelopes:
                params = require_params(table)
                check_envelope(table, params)
                ax.plot(
                    table.times,
                    envelope_floor(params, table.times),
                    color=style["color_envelope"],
                    linewidth=style["linewidth_envelope"],
                    linestyle=style["envelope_linestyle"],
                    label="envelope" if not many else f"{table.label} envelope",
                )

        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
        ax.set_ylim(-0.02, 1.02)
        ax.grid(True, alpha=style["grid_alpha"])
        if spec.title:
            ax.set_title(spec.title)
        ax.legend(fontsize=style["legend_fontsize"], loc="upper right")
        fig.tight_layout()

        png_path = spec.output.with_suffix(".png")
        svg_path = spec.output.with_suffix(".svg")
        png_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(png_path)
        # Date metadata off so reruns are byte-identical.
        fig.savefig(svg_path, metadata={"Date": None})
        plt.close(fig)
    return png_path, svg_path
