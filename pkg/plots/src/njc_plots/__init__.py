"""Figure rendering for njc trajectory exports.

Consumes the simulator's file interface only: trajectory CSVs and their
JSON metadata sidecars.
"""

from . import errors
from .csvio import TrajectoryTable, read_trajectory, require_params, sidecar_path
from .errors import (
    EnvelopeMismatch,
    MalformedCsv,
    MissingColumn,
    MissingSidecar,
    PlotsError,
)
from .render import ENVELOPE_TOLERANCE, PlotSpec, check_envelope, envelope_floor, render

__version__ = "0.1.0"

__all__ = [
    "ENVELOPE_TOLERANCE",
    "EnvelopeMismatch",
    "MalformedCsv",
    "MissingColumn",
    "MissingSidecar",
    "PlotSpec",
    "PlotsError",
    "TrajectoryTable",
    "check_envelope",
    "envelope_floor",
    "errors",
    "read_trajectory",
    "render",
    "require_params",
    "sidecar_path",
]
