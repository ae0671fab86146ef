"""Reproducibility layer: presets, scenario runs, sweeps and file export.

External formats produced here:

- trajectory CSV: header ``t,pe_analytic,pe_numeric`` (columns present only
  for the solvers that ran), UTF-8, LF line endings, ``.`` decimal separator,
  plus a ``<stem>.meta.json`` sidecar echoing every input;
- sweep JSON: array of ``{"params": {...}, "metrics": {...}}`` objects;
- scenario config JSON: strict schema with ``spec_version: 1``; unknown keys
  are an error.

Numbers are serialized with 12 significant digits, lowercase scientific
notation when ``|x| < 1e-3`` or ``|x| >= 1e6``; NaN/Inf are refused.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import (
    ConfigError,
    GridTooLarge,
    NonFiniteValue,
    NonPhysicalState,
    UnknownPreset,
)
from .model import (
    ModelParams,
    dressed_transform,
    eigenstructure,
    validate_params,
)
from .observables import (
    SanityReport,
    find_extrema,
    fit_short_time_rate,
    sanity,
    sanity_summary,
)
from .oracle import build_liouvillian, integrate, verify_eigenpairs
from .spectral import (
    eigenoperators,
    expand_initial,
    pe_closed_form,
    pe_closed_form_expanded,
    short_time_rate,
)

# Internal integrator step target; the output grid is subsampled from it.
ORACLE_DT = 0.01

# Hard cap on the number of sweep grid points.
SWEEP_POINT_CAP = 100_000

_SOLVER_CHOICES = ("analytic", "numeric", "both")
_PARAM_FIELDS = ("omega", "g", "chi", "gamma_plus", "gamma_minus")
_METRIC_CHOICES = ("short_time_rate", "first_min_t", "first_min_value")

_PRESETS = {
    "fig1": (1.0, 0.1, 0.0, 0.004, 0.004),
    "fig2": (1.0, 0.1, 0.04, 0.007, 0.001),
    "fig3": (1.0, 0.1, 0.04, 0.004, 0.004),
    "fig4": (1.0, 0.1, 0.0, 0.007, 0.001),
}


def format_number(x: float) -> str:
    """Serialize one real number per the package-wide 12-digit rule."""
    x = float(x)
    if not math.isfinite(x):
        raise NonFiniteValue(f"cannot serialize non-finite value {x}")
    ax = abs(x)
    if x != 0.0 and (ax < 1e-3 or ax >= 1e6):
        return f"{x:.11e}"
    return f"{x:.12g}"


def _dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON with `format_number` applied to every float."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [
            f'{pad}  {json.dumps(str(k))}: {_dumps(v, indent + 1)}'
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_dumps(v) for v in obj) + "]"
        rows = [f"{pad}  {_dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_number(float(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass(frozen=True, eq=False)
class Scenario:
    """One fully specified simulation run.

    `initial_state` is either the tag "e0" (the default, qubit excited and
    no phonon) or an explicit 3x3 density matrix in the bare basis.
    """

    params: ModelParams
    t_end: float
    dt: float
    solvers: str = "both"
    initial_state: object = "e0"
    label: str = ""

    def __post_init__(self) -> None:
        if not self.t_end > 0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        if not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.solvers not in _SOLVER_CHOICES:
            raise ConfigError(
                f"solvers must be one of {_SOLVER_CHOICES}, got {self.solvers!r}"
            )
        limit = math.pi / (20.0 * eigenstructure(self.params).Omega)
        if self.dt > limit:
            raise ConfigError(
                f"dt={self.dt} violates the sampling rule dt <= pi/(20*Omega) "
                f"= {limit:.6g}"
            )
        if isinstance(self.initial_state, str):
            if self.initial_state != "e0":
                raise ConfigError(
                    f"unknown initial_state tag {self.initial_state!r}"
                )
        else:
            rho0 = np.asarray(self.initial_state, dtype=complex)
            if rho0.shape != (3, 3):
                raise ConfigError(
                    f"initial_state matrix must be 3x3, got shape {rho0.shape}"
                )
            report = sanity(rho0)
            if (
                report.trace_drift > 1e-10
                or report.hermiticity_defect > 1e-12
                or report.min_eigenvalue < -1e-10
            ):
                raise NonPhysicalState(
                    "initial_state is not a physical density matrix: "
                    f"trace drift {report.trace_drift:.3e}, hermiticity defect "
                    f"{report.hermiticity_defect:.3e}, min eigenvalue "
                    f"{report.min_eigenvalue:.3e}"
                )
            object.__setattr__(self, "initial_state", rho0)


def preset(name: str) -> Scenario:
    """Named parameter sets fig1..fig4 with the shared run defaults."""
    if name not in _PRESETS:
        raise UnknownPreset(
            f"unknown preset {name!r}; choose from {sorted(_PRESETS)}"
        )
    return Scenario(
        params=validate_params(*_PRESETS[name]),
        t_end=2000.0,
        dt=0.5,
        solvers="both",
        initial_state="e0",
        label=name,
    )


@dataclass(frozen=True, eq=False)
class RunResult:
    """Output bundle of `run_scenario`."""

    scenario: Scenario
    times: np.ndarray
    pe_analytic: np.ndarray | None
    pe_numeric: np.ndarray | None
    deviation: float | None
    sanity_analytic: SanityReport | None
    sanity_numeric: SanityReport | None
    metadata: dict


def _initial_matrix(scenario: Scenario) -> np.ndarray:
    if isinstance(scenario.initial_state, str):
        rho0 = np.zeros((3, 3), dtype=complex)
        rho0[0, 0] = 1.0
        return rho0
    return np.asarray(scenario.initial_state, dtype=complex)


def run_scenario(scenario: Scenario) -> RunResult:
    """Run the requested solver(s) on one scenario.

    Deterministic: fixed inputs give identical arrays and files. With
    solvers="both" the result carries the max-abs deviation between the two
    pe columns on the shared output grid.
    """
    params = scenario.params
    n_out = int(math.floor(scenario.t_end / scenario.dt + 1e-9))
    times = np.arange(n_out + 1) * scenario.dt
    rho0 = _initial_matrix(scenario)

    pe_analytic = None
    pe_numeric = None
    sanity_a = None
    sanity_n = None
    oracle_dt = None

    if scenario.solvers in ("analytic", "both"):
        es = eigenstructure(params)
        basis = eigenoperators(es, params.gamma_plus, params.gamma_minus)
        coeffs = expand_initial(rho0, basis)
        u = dressed_transform(es)
        modes_bare = np.stack([u @ m.rho @ u.T for m in basis.modes])
        lams = np.array([m.lam for m in basis.modes])
        weights = np.array(coeffs.c)[:, None] * np.exp(np.outer(lams, times))
        states = np.einsum("kt,kij->tij", weights, modes_bare)
        diag_imag = float(np.max(np.abs(states[:, 0, 0].imag)))
        if diag_imag > 1e-12:
            raise NonPhysicalState(
                f"analytic population picked up imaginary part {diag_imag:.3e}"
            )
        pe_analytic = states[:, 0, 0].real.copy()
        sanity_a = sanity_summary(states)

    if scenario.solvers in ("numeric", "both"):
        superop = build_liouvillian(params)
        # Substep the output grid down to the integrator target, and further
        # if the generator is stiff, so the RK4 stability guard never trips.
        bound = float(np.max(np.sum(np.abs(superop.matrix), axis=1)))
        n_sub = max(
            1,
            int(math.ceil(scenario.dt / ORACLE_DT - 1e-9)),
            int(math.ceil(scenario.dt * bound / 0.05 - 1e-9)),
        )
        oracle_dt = scenario.dt / n_sub
        traj = integrate(superop, rho0, t_end=scenario.t_end, dt=oracle_dt)
        pe_numeric = traj.pe[::n_sub][: n_out + 1].copy()
        sanity_n = sanity_summary(traj.states[::n_sub][: n_out + 1])

    deviation = None
    if pe_analytic is not None and pe_numeric is not None:
        deviation = float(np.max(np.abs(pe_analytic - pe_numeric)))

    metadata = {
        "label": scenario.label,
        "solvers": scenario.solvers,
        "params": {name: getattr(params, name) for name in _PARAM_FIELDS},
        "t_end": scenario.t_end,
        "dt": scenario.dt,
        "oracle_dt": oracle_dt,
        "initial_state": (
            scenario.initial_state
            if isinstance(scenario.initial_state, str)
            else "custom"
        ),
        "n_points": n_out + 1,
        "deviation": deviation,
    }
    return RunResult(
        scenario=scenario,
        times=times,
        pe_analytic=pe_analytic,
        pe_numeric=pe_numeric,
        deviation=deviation,
        sanity_analytic=sanity_a,
        sanity_numeric=sanity_n,
        metadata=metadata,
    )


@dataclass(frozen=True)
class SweepAxis:
    """Linear range over one ModelParams field."""

    field: str
    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if self.field not in _PARAM_FIELDS:
            raise ConfigError(
                f"unknown sweep field {self.field!r}; choose from {_PARAM_FIELDS}"
            )
        if self.count < 1:
            raise ConfigError(f"axis count must be >= 1, got {self.count}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian product of axes around a base parameter set."""

    base: ModelParams
    axes: tuple[SweepAxis, ...]
    metrics: tuple[str, ...] = _METRIC_CHOICES

    def __post_init__(self) -> None:
        total = 1
        for axis in self.axes:
            total *= axis.count
        if total > SWEEP_POINT_CAP:
            raise GridTooLarge(
                f"sweep grid has {total} points, cap is {SWEEP_POINT_CAP}"
            )
        for name in self.metrics:
            if name not in _METRIC_CHOICES:
                raise ConfigError(
                    f"unknown metric {name!r}; choose from {_METRIC_CHOICES}"
                )

    def points(self) -> list[ModelParams]:
        """Grid points in index order, last axis fastest."""
        points = [self.base]
        for axis in self.axes:
            points = [
                replace(p, **{axis.field: float(v)})
                for p in points
                for v in axis.values()
            ]
        return points


def _first_minimum(params: ModelParams) -> tuple[float, float]:
    """Time and value of the first local minimum of the closed-form Pe."""
    period = math.pi / eigenstructure(params).Omega
    step = period / 800.0
    n = int(math.ceil(2.2 * period / step))
    times = np.arange(n + 1) * step
    extrema = find_extrema((times, pe_closed_form(params, times)), "minima")
    return extrema.points[0]


def _sweep_row(params: ModelParams, metrics: tuple[str, ...]) -> dict:
    row_metrics = {}
    if "first_min_t" in metrics or "first_min_value" in metrics:
        t_min, v_min = _first_minimum(params)
        if "first_min_t" in metrics:
            row_metrics["first_min_t"] = t_min
        if "first_min_value" in metrics:
            row_metrics["first_min_value"] = v_min
    if "short_time_rate" in metrics:
        row_metrics["short_time_rate"] = short_time_rate(params)
    ordered = {name: row_metrics[name] for name in metrics}
    return {
        "params": {name: getattr(params, name) for name in _PARAM_FIELDS},
        "metrics": ordered,
    }


def run_sweep(grid: SweepGrid) -> list[dict]:
    """Evaluate the grid's metrics at every point, in grid index order.

    The env var NJC_THREADS (integer > 1) turns on a thread pool; the row
    order is by grid index either way.
    """
    points = grid.points()
    raw = os.environ.get("NJC_THREADS", "1")
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"NJC_THREADS must be an integer, got {raw!r}") from None
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda p: _sweep_row(p, grid.metrics), points))
    return [_sweep_row(p, grid.metrics) for p in points]


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _trajectory_csv(result: RunResult) -> str:
    columns = [("t", result.times)]
    if result.pe_analytic is not None:
        columns.append(("pe_analytic", result.pe_analytic))
    if result.pe_numeric is not None:
        columns.append(("pe_numeric", result.pe_numeric))
    lines = [",".join(name for name, _ in columns)]
    arrays = [arr for _, arr in columns]
    for row in zip(*arrays):
        lines.append(",".join(format_number(x) for x in row))
    return "\n".join(lines) + "\n"


def _sweep_csv(rows: list[dict]) -> str:
    metric_names = list(rows[0]["metrics"]) if rows else []
    lines = [",".join(list(_PARAM_FIELDS) + metric_names)]
    for row in rows:
        cells = [format_number(row["params"][name]) for name in _PARAM_FIELDS]
        cells += [format_number(row["metrics"][name]) for name in metric_names]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def export(obj, format: str, path) -> Path:
    """Write a RunResult or a sweep row table to disk.

    RunResult + csv writes the trajectory CSV and a ``<stem>.meta.json``
    sidecar next to it; RunResult + json writes one JSON document with the
    same metadata plus the data columns. Tables go to a JSON array or a flat
    CSV. Re-exporting identical inputs is byte-identical.
    """
    path = Path(path)
    if format not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json', got {format!r}")
    if isinstance(obj, RunResult):
        if format == "csv":
            _write_text(path, _trajectory_csv(obj))
            _write_text(
                path.with_suffix(".meta.json"), _dumps(obj.metadata) + "\n"
            )
        else:
            doc = dict(obj.metadata)
            doc["data"] = {"t": list(obj.times)}
            if obj.pe_analytic is not None:
                doc["data"]["pe_analytic"] = list(obj.pe_analytic)
            if obj.pe_numeric is not None:
                doc["data"]["pe_numeric"] = list(obj.pe_numeric)
            _write_text(path, _dumps(doc) + "\n")
        return path
    if isinstance(obj, list):
        if format == "json":
            _write_text(path, _dumps(obj) + "\n")
        else:
            _write_text(path, _sweep_csv(obj))
        return path
    raise TypeError(f"cannot export {type(obj).__name__}")


def validation_checks(params: ModelParams) -> list[tuple[str, bool, str]]:
    """Run the full cross-validation suite on one parameter set.

    Returns (name, passed, detail) rows covering: eigenpair residuals of the
    generator against the closed-form modes, the coefficient expansion of
    |e,0><e,0|, the identity between the two closed-form Pe implementations,
    the analytic-vs-numeric deviation, state sanity along the run, and the
    fitted short-time decay rate.

    Fault-injection hook: setting the env var NJC_CORRUPT_LAMBDA perturbs one
    eigenvalue before the residual check, so tests can prove the eigenpair
    gate actually fails on bad input.
    """
    checks: list[tuple[str, bool, str]] = []
    es = eigenstructure(params)
    basis = eigenoperators(es, params.gamma_plus, params.gamma_minus)
    if os.environ.get("NJC_CORRUPT_LAMBDA"):
        modes = list(basis.modes)
        modes[5] = replace(modes[5], lam=modes[5].lam + 1e-6)
        basis = replace(basis, modes=tuple(modes))
    superop = build_liouvillian(params)
    residuals = verify_eigenpairs(superop, basis)
    worst = float(np.max(residuals))
    checks.append(
        (
            "eigenpair residuals",
            worst <= 1e-12,
            f"max ||L rho_k - lambda_k rho_k|| = {worst:.3e} (limit 1e-12)",
        )
    )

    rho0 = np.zeros((3, 3), dtype=complex)
    rho0[0, 0] = 1.0
    coeffs = np.array(expand_initial(rho0, basis).c)
    cos_th = params.chi / es.Omega
    sin_th = params.g / es.Omega
    expected = np.zeros(9, dtype=complex)
    expected[0] = 1.0
    expected[1] = 0.5 * (1.0 - cos_th)
    expected[2] = 0.5 * (1.0 + cos_th)
    expected[5] = -0.5 * sin_th
    expected[8] = -0.5 * sin_th
    coeff_err = float(np.max(np.abs(coeffs - expected)))
    checks.append(
        (
            "coefficient expansion",
            coeff_err <= 1e-12,
            f"max |C_k - closed form| = {coeff_err:.3e} (limit 1e-12)",
        )
    )

    grid = np.linspace(0.0, 2000.0, 10_001)
    identity_err = float(
        np.max(
            np.abs(pe_closed_form(params, grid) - pe_closed_form_expanded(params, grid))
        )
    )
    checks.append(
        (
            "closed-form identity",
            identity_err <= 1e-12,
            f"max |verbatim - expanded| = {identity_err:.3e} (limit 1e-12)",
        )
    )

    dt_run = min(0.5, math.pi / (20.0 * es.Omega))
    result = run_scenario(
        Scenario(params=params, t_end=2000.0, dt=dt_run, solvers="both")
    )
    assert result.deviation is not None
    checks.append(
        (
            "solver deviation",
            result.deviation <= 1e-8,
            f"max |pe_analytic - pe_numeric| = {result.deviation:.3e} (limit 1e-8)",
        )
    )

    reports = [result.sanity_analytic, result.sanity_numeric]
    drift = max(r.trace_drift for r in reports if r is not None)
    defect = max(r.hermiticity_defect for r in reports if r is not None)
    min_eig = min(r.min_eigenvalue for r in reports if r is not None)
    sane = drift <= 1e-10 and defect <= 1e-12 and min_eig >= -1e-10
    checks.append(
        (
            "state sanity",
            sane,
            f"trace drift {drift:.3e}, hermiticity defect {defect:.3e}, "
            f"min eigenvalue {min_eig:.3e}",
        )
    )

    rate = short_time_rate(params)
    if rate > 0:
        window = 0.005 * rate / params.g**2
        times = np.linspace(0.0, window, 51)
        fitted = fit_short_time_rate((times, pe_closed_form(params, times)))
        rate_ok = abs(fitted - rate) <= 0.01 * rate
        detail = (
            f"fitted {fitted:.6e} vs closed form {rate:.6e} "
            f"(limit 1% relative)"
        )
    else:
        # Window 1e-7: the quadratic term contributes slope ~ g^2 * window,
        # which must sit well below the 1e-8 absolute limit.
        times = np.linspace(0.0, 1e-7, 51)
        fitted = fit_short_time_rate((times, pe_closed_form(params, times)))
        rate_ok = abs(fitted) <= 1e-8
        detail = f"fitted {fitted:.3e} with no dissipation (limit 1e-8 absolute)"
    checks.append(("short-time rate", rate_ok, detail))
    return checks


def _require_keys(raw: dict, allowed: dict, where: str) -> None:
    for key in raw:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {where}")
    for key, required in allowed.items():
        if required and key not in raw:
            raise ConfigError(f"missing required key {key!r} in {where}")


def _parse_initial_state(raw) -> object:
    if isinstance(raw, str):
        return raw
    if not isinstance(raw, list):
        raise ConfigError("initial_state must be the tag 'e0' or a 3x3 matrix")
    matrix = np.zeros((3, 3), dtype=complex)
    if len(raw) != 3:
        raise ConfigError("initial_state matrix must have 3 rows")
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != 3:
            raise ConfigError(f"initial_state row {i} must have 3 entries")
        for j, cell in enumerate(row):
            if isinstance(cell, (int, float)) and not isinstance(cell, bool):
                matrix[i, j] = float(cell)
            elif (
                isinstance(cell, list)
                and len(cell) == 2
                and all(isinstance(x, (int, float)) for x in cell)
            ):
                matrix[i, j] = complex(float(cell[0]), float(cell[1]))
            else:
                raise ConfigError(
                    f"initial_state entry ({i},{j}) must be a number or "
                    "a [re, im] pair"
                )
    return matrix


def parse_scenario_config(path) -> Scenario:
    """Load a scenario from a strict-schema JSON file.

    Top-level keys: spec_version (must be 1), params, t_end, dt, and the
    optional solvers, initial_state, label. Anything else is an error that
    names the offending key.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(raw, dict):
        raise ConfigError("scenario config must be a JSON object")
    _require_keys(
        raw,
        {
            "spec_version": True,
            "params": True,
            "t_end": True,
            "dt": True,
            "solvers": False,
            "initial_state": False,
            "label": False,
        },
        "scenario config",
    )
    if raw["spec_version"] != 1:
        raise ConfigError(
            f"unsupported spec_version {raw['spec_version']!r}; expected 1"
        )
    if not isinstance(raw["params"], dict):
        raise ConfigError("'params' must be an object")
    _require_keys(
        raw["params"], {name: True for name in _PARAM_FIELDS}, "params"
    )
    for name in _PARAM_FIELDS:
        value = raw["params"][name]
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"params.{name} must be a number")
    for name in ("t_end", "dt"):
        if not isinstance(raw[name], (int, float)) or isinstance(raw[name], bool):
            raise ConfigError(f"'{name}' must be a number")
    solvers = raw.get("solvers", "both")
    if not isinstance(solvers, str):
        raise ConfigError("'solvers' must be a string")
    label = raw.get("label", "")
    if not isinstance(label, str):
        raise ConfigError("'label' must be a string")
    params = validate_params(*(raw["params"][name] for name in _PARAM_FIELDS))
    return Scenario(
        params=params,
        t_end=float(raw["t_end"]),
        dt=float(raw["dt"]),
        solvers=solvers,
        initial_state=_parse_initial_state(raw.get("initial_state", "e0")),
        label=label,
    )
