"""Reading njc trajectory exports: CSV tables and their JSON sidecars."""

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import MalformedCsv, MissingColumn, MissingSidecar

PARAM_KEYS = ("omega", "g", "chi", "gamma_plus", "gamma_minus")


@dataclass(frozen=True)
class TrajectoryTable:
    """One parsed CSV: time grid, population columns, sidecar metadata."""

    source: Path
    times: np.ndarray
    columns: dict
    meta: dict | None

    @property
    def label(self) -> str:
        if self.meta and self.meta.get("label"):
            return str(self.meta["label"])
        return self.source.stem

    def curve(self) -> tuple[str, np.ndarray]:
        """The preferred population column: analytic if present."""
        for name in ("pe_analytic", "pe_numeric"):
            if name in self.columns:
                return name, self.columns[name]
        raise MissingColumn(f"{self.source}: no population column")


def sidecar_path(csv_path: Path) -> Path:
    # Mirrors how the simulator names the sidecar next to its CSV.
    return csv_path.with_suffix(".meta.json")


def read_trajectory(path) -> TrajectoryTable:
    """Parse a trajectory CSV and, when present, its metadata sidecar.

    The header must name a leading ``t`` column and at least one of
    ``pe_analytic`` / ``pe_numeric``. Every row must be numeric and as
    wide as the header.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedCsv(f"{path}: empty file") from None
        rows = list(reader)

    if not header or header[0] != "t":
        raise MissingColumn(f"{path}: first column must be 't', got {header[:1]!r}")
    known = {"pe_analytic", "pe_numeric"}
    extra = [name for name in header[1:] if name not in known]
    if extra:
        raise MalformedCsv(f"{path}: unrecognized columns {extra!r}")
    if not any(name in known for name in header[1:]):
        raise MissingColumn(f"{path}: no pe_analytic or pe_numeric column")
    if not rows:
        raise MalformedCsv(f"{path}: header but no data rows")

    data = np.empty((len(rows), len(header)))
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise MalformedCsv(
                f"{path}: row {i + 2} has {len(row)} fields, header has {len(header)}"
            )
        try:
            data[i] = [float(cell) for cell in row]
        except ValueError as exc:
            raise MalformedCsv(f"{path}: row {i + 2}: {exc}") from None
    if not np.isfinite(data).all():
        raise MalformedCsv(f"{path}: non-finite value in data")

    times = data[:, 0]
    if len(times) >= 2 and not np.all(np.diff(times) > 0.0):
        raise MalformedCsv(f"{path}: time column is not strictly increasing")

    meta = None
    side = sidecar_path(path)
    if side.exists():
        meta = json.loads(side.read_text(encoding="utf-8"))

    columns = {name: data[:, k] for k, name in enumerate(header) if name in known}
    return TrajectoryTable(source=path, times=times, columns=columns, meta=meta)


def require_params(table: TrajectoryTable) -> dict:
    """Model parameters from the sidecar, for envelope reconstruction."""
    if table.meta is None:
        raise MissingSidecar(
            f"{table.source}: envelopes need {sidecar_path(table.source).name}"
        )
    params = table.meta.get("params")
    if not isinstance(params, dict) or set(params) != set(PARAM_KEYS):
        raise MalformedCsv(f"{table.source}: sidecar params are incomplete")
    return {key: float(params[key]) for key in PARAM_KEYS}
