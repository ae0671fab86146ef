"""Scenario running, sweeps, file export, config parsing, self-validation."""

import dataclasses
import json
import math

import numpy as np
import pytest

import njc
from njc.errors import (
    ConfigError,
    GridTooLarge,
    NonFiniteValue,
    NonPhysicalState,
    UnknownPreset,
)


def test_format_number_goldens():
    cases = {
        0.0: "0",
        1.0: "1",
        0.5: "0.5",
        0.001: "0.001",
        1e6: "1.00000000000e+06",
        0.00075: "7.50000000000e-04",
        -0.0005: "-5.00000000000e-04",
        0.10770329614269009: "0.107703296143",
    }
    for x, want in cases.items():
        assert njc.format_number(x) == want


def test_format_number_rejects_non_finite():
    for x in (float("nan"), float("inf"), -float("inf")):
        with pytest.raises(NonFiniteValue):
            njc.format_number(x)


def test_preset_catalog():
    captions = {
        "fig1": (1.0, 0.1, 0.0, 0.004, 0.004),
        "fig2": (1.0, 0.1, 0.04, 0.007, 0.001),
        "fig3": (1.0, 0.1, 0.04, 0.004, 0.004),
        "fig4": (1.0, 0.1, 0.0, 0.007, 0.001),
    }
    for name, (omega, g, chi, gp, gm) in captions.items():
        sc = njc.preset(name)
        assert (sc.params.omega, sc.params.g, sc.params.chi) == (omega, g, chi)
        assert (sc.params.gamma_plus, sc.params.gamma_minus) == (gp, gm)
        assert sc.t_end == 2000.0
        assert sc.dt == 0.5
        assert sc.solvers == "both"
        assert sc.label == name
    with pytest.raises(UnknownPreset):
        njc.preset("fig9")


def test_scenario_validation():
    p = njc.validate_params(1.0, 0.1, 0.04, 0.004, 0.004)
    with pytest.raises(ConfigError):
        njc.Scenario(params=p, t_end=0.0, dt=0.5)
    with pytest.raises(ConfigError):
        njc.Scenario(params=p, t_end=10.0, dt=-0.5)
    with pytest.raises(ConfigError):
        njc.Scenario(params=p, t_end=10.0, dt=0.5, solvers="magic")
    with pytest.raises(ConfigError, match=r"pi/\(20\*Omega\)"):
        njc.Scenario(params=p, t_end=10.0, dt=2.0)
    with pytest.raises(ConfigError):
        njc.Scenario(params=p, t_end=10.0, dt=0.5, initial_state="g1")
    with pytest.raises(NonPhysicalState):
        njc.Scenario(
            params=p, t_end=10.0, dt=0.5,
            initial_state=np.diag([2.0, -1.0, 0.0]).astype(complex),
        )


def test_run_scenario_grid_and_deviation():
    sc = dataclasses.replace(njc.preset("fig1"), t_end=100.0, dt=0.5)
    res = njc.run_scenario(sc)
    assert len(res.times) == 201
    assert res.times[0] == 0.0 and res.times[-1] == 100.0
    assert res.deviation <= 1e-8
    assert np.abs(res.pe_analytic - res.pe_numeric).max() == res.deviation
    assert res.metadata["n_points"] == 201
    assert res.metadata["oracle_dt"] == njc.ORACLE_DT
    assert res.metadata["deviation"] == res.deviation
    assert res.sanity_analytic is not None and res.sanity_numeric is not None


def test_run_scenario_single_solver():
    sc = dataclasses.replace(njc.preset("fig1"), t_end=20.0, dt=0.5, solvers="analytic")
    res = njc.run_scenario(sc)
    assert res.pe_numeric is None and res.deviation is None
    assert res.sanity_numeric is None
    assert res.metadata["oracle_dt"] is None
    sc = dataclasses.replace(sc, solvers="numeric")
    res = njc.run_scenario(sc)
    assert res.pe_analytic is None and res.deviation is None
    assert res.pe_numeric[0] == 1.0


def test_run_scenario_custom_initial_state():
    ground = np.diag([0.0, 0.0, 1.0]).astype(complex)
    sc = dataclasses.replace(
        njc.preset("fig2"), t_end=20.0, dt=0.5, initial_state=ground
    )
    res = njc.run_scenario(sc)
    assert res.metadata["initial_state"] == "custom"
    assert np.abs(res.pe_analytic).max() <= 1e-12
    assert res.deviation <= 1e-8


def test_run_scenario_coarse_step_keeps_oracle_stable():
    # Output steps above the stability bound are subdivided internally.
    p = njc.validate_params(1.0, 0.1, 0.0, 0.004, 0.004)
    sc = njc.Scenario(params=p, t_end=50.0, dt=1.5, solvers="both")
    res = njc.run_scenario(sc)
    assert res.deviation <= 1e-8


def test_sweep_axis_values():
    ax = njc.SweepAxis("gamma_plus", 0.001, 0.007, 4)
    assert np.allclose(ax.values(), [0.001, 0.003, 0.005, 0.007], atol=1e-18)
    with pytest.raises(ConfigError):
        njc.SweepAxis("coupling", 0.0, 1.0, 3)
    with pytest.raises(ConfigError):
        njc.SweepAxis("g", 0.0, 1.0, 0)


def test_sweep_grid_points_order():
    base = njc.validate_params(1.0, 0.1, 0.0, 0.004, 0.002)
    grid = njc.SweepGrid(
        base=base,
        axes=(
            njc.SweepAxis("chi", 0.0, 0.04, 2),
            njc.SweepAxis("gamma_plus", 0.001, 0.007, 3),
        ),
        metrics=("short_time_rate",),
    )
    pts = grid.points()
    assert len(pts) == 6
    # Last axis varies fastest.
    assert [(p.chi, p.gamma_plus) for p in pts] == [
        (0.0, 0.001), (0.0, 0.004), (0.0, 0.007),
        (0.04, 0.001), (0.04, 0.004), (0.04, 0.007),
    ]
    for p in pts:
        assert p.gamma_minus == 0.002 and p.g == 0.1


def test_sweep_grid_guards():
    base = njc.validate_params(1.0, 0.1, 0.0, 0.004, 0.002)
    with pytest.raises(GridTooLarge):
        njc.SweepGrid(
            base=base,
            axes=(
                njc.SweepAxis("g", 0.01, 1.0, 400),
                njc.SweepAxis("chi", 0.0, 0.005, 300),
            ),
        )
    with pytest.raises(ConfigError):
        njc.SweepGrid(base=base, axes=(), metrics=("weird_metric",))


def test_run_sweep_rate_metric_linear_regime():
    base = njc.validate_params(1.0, 0.1, 0.0, 0.004, 0.002)
    grid = njc.SweepGrid(
        base=base,
        axes=(njc.SweepAxis("gamma_plus", 0.001, 0.007, 4),),
        metrics=("short_time_rate",),
    )
    rows = njc.run_sweep(grid)
    assert len(rows) == 4
    for row, gp in zip(rows, (0.001, 0.003, 0.005, 0.007)):
        assert row["params"]["gamma_plus"] == gp
        # chi = 0 removes the asymmetry term exactly.
        assert row["metrics"]["short_time_rate"] == (gp + 0.002) / 4.0


def test_run_sweep_first_minimum_metrics():
    base = njc.validate_params(1.0, 0.1, 0.04, 0.004, 0.004)
    grid = njc.SweepGrid(base=base, axes=(), metrics=("first_min_t", "first_min_value"))
    row = njc.run_sweep(grid)[0]
    es = njc.eigenstructure(base)
    assert abs(row["metrics"]["first_min_t"] - math.pi / (2 * es.Omega)) <= 0.05
    floor = njc.pe_lower_envelope(base, row["metrics"]["first_min_t"])
    assert abs(row["metrics"]["first_min_value"] - floor) <= 5e-6


def test_run_sweep_thread_pool_keeps_order(monkeypatch):
    base = njc.validate_params(1.0, 0.1, 0.0, 0.004, 0.002)
    grid = njc.SweepGrid(
        base=base,
        axes=(njc.SweepAxis("gamma_plus", 0.001, 0.007, 6),),
        metrics=("short_time_rate",),
    )
    serial = njc.run_sweep(grid)
    monkeypatch.setenv("NJC_THREADS", "4")
    assert njc.run_sweep(grid) == serial
    monkeypatch.setenv("NJC_THREADS", "several")
    with pytest.raises(ConfigError):
        njc.run_sweep(grid)


@pytest.fixture()
def short_run():
    sc = dataclasses.replace(njc.preset("fig2"), t_end=50.0, dt=0.5)
    return njc.run_scenario(sc)


def test_export_trajectory_csv(tmp_path, short_run):
    out = njc.export(short_run, "csv", tmp_path / "run.csv")
    assert out == tmp_path / "run.csv"
    raw = out.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == "t,pe_analytic,pe_numeric"
    assert len(lines) == 1 + 101
    first = lines[1].split(",")
    assert first[0] == "0" and first[1] == "1" and first[2] == "1"
    # Values survive the round trip at the printed precision.
    t_back = np.array([float(row.split(",")[0]) for row in lines[1:]])
    pe_back = np.array([float(row.split(",")[1]) for row in lines[1:]])
    assert np.abs(t_back - short_run.times).max() <= 1e-9
    assert np.abs(pe_back - short_run.pe_analytic).max() <= 1e-11

    meta = json.loads((tmp_path / "run.meta.json").read_text())
    assert set(meta) == {
        "label", "solvers", "params", "t_end", "dt",
        "oracle_dt", "initial_state", "n_points", "deviation",
    }
    assert meta["params"]["chi"] == 0.04
    assert meta["n_points"] == 101


def test_export_is_deterministic(tmp_path, short_run):
    a = njc.export(short_run, "csv", tmp_path / "a.csv").read_bytes()
    b = njc.export(short_run, "csv", tmp_path / "b.csv").read_bytes()
    assert a == b
    ma = (tmp_path / "a.meta.json").read_bytes()
    mb = (tmp_path / "b.meta.json").read_bytes()
    assert ma == mb
    ja = njc.export(short_run, "json", tmp_path / "a.json").read_bytes()
    jb = njc.export(short_run, "json", tmp_path / "b.json").read_bytes()
    assert ja == jb


def test_export_analytic_only_csv(tmp_path):
    sc = dataclasses.replace(
        njc.preset("fig1"), t_end=10.0, dt=0.5, solvers="analytic"
    )
    out = njc.export(njc.run_scenario(sc), "csv", tmp_path / "run.csv")
    assert out.read_text().splitlines()[0] == "t,pe_analytic"


def test_export_trajectory_json(tmp_path, short_run):
    out = njc.export(short_run, "json", tmp_path / "run.json")
    doc = json.loads(out.read_text())
    assert set(doc["data"]) == {"t", "pe_analytic", "pe_numeric"}
    assert len(doc["data"]["t"]) == 101
    assert doc["params"]["g"] == 0.1
    assert doc["deviation"] == pytest.approx(short_run.deviation, rel=1e-9)


def test_export_sweep_tables(tmp_path):
    base = njc.validate_params(1.0, 0.1, 0.0, 0.004, 0.002)
    grid = njc.SweepGrid(
        base=base,
        axes=(njc.SweepAxis("gamma_plus", 0.001, 0.007, 4),),
        metrics=("short_time_rate",),
    )
    rows = njc.run_sweep(grid)
    out = njc.export(rows, "csv", tmp_path / "sweep.csv")
    lines = out.read_text().splitlines()
    assert lines[0] == "omega,g,chi,gamma_plus,gamma_minus,short_time_rate"
    assert len(lines) == 5
    out = njc.export(rows, "json", tmp_path / "sweep.json")
    back = json.loads(out.read_text())
    assert [r["params"]["gamma_plus"] for r in back] == [0.001, 0.003, 0.005, 0.007]

    empty_csv = njc.export([], "csv", tmp_path / "empty.csv")
    assert empty_csv.read_text() == "omega,g,chi,gamma_plus,gamma_minus\n"
    empty_json = njc.export([], "json", tmp_path / "empty.json")
    assert json.loads(empty_json.read_text()) == []


def test_export_rejects_bad_requests(tmp_path, short_run):
    with pytest.raises(ConfigError):
        njc.export(short_run, "parquet", tmp_path / "x.parquet")
    with pytest.raises(TypeError):
        njc.export({"not": "supported"}, "csv", tmp_path / "x.csv")


def _write_config(tmp_path, doc):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc))
    return path


BASE_DOC = {
    "spec_version": 1,
    "params": {
        "omega": 1.0, "g": 0.1, "chi": 0.04,
        "gamma_plus": 0.004, "gamma_minus": 0.004,
    },
    "t_end": 100.0,
    "dt": 0.5,
}


def test_parse_scenario_config_round_trip(tmp_path):
    doc = dict(BASE_DOC, solvers="analytic", label="demo")
    sc = njc.parse_scenario_config(_write_config(tmp_path, doc))
    assert sc.params == njc.validate_params(1.0, 0.1, 0.04, 0.004, 0.004)
    assert (sc.t_end, sc.dt, sc.solvers, sc.label) == (100.0, 0.5, "analytic", "demo")
    assert sc.initial_state == "e0"


def test_parse_scenario_config_matrix_state(tmp_path):
    doc = dict(BASE_DOC)
    doc["initial_state"] = [
        [[0.5, 0.0], [0.0, 0.5], [0.0, 0.0]],
        [[0.0, -0.5], [0.5, 0.0], [0.0, 0.0]],
        [0.0, 0.0, 0.0],
    ]
    sc = njc.parse_scenario_config(_write_config(tmp_path, doc))
    rho = np.asarray(sc.initial_state)
    assert rho[0, 1] == 0.5j
    assert rho[1, 0] == -0.5j
    assert rho[0, 0] == 0.5 and rho[2, 2] == 0.0


def test_parse_scenario_config_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"spec_version": 1,\n "params": }')
    with pytest.raises(ConfigError, match="line 2"):
        njc.parse_scenario_config(bad)

    with pytest.raises(ConfigError, match="badkey"):
        njc.parse_scenario_config(
            _write_config(tmp_path, dict(BASE_DOC, badkey=1))
        )
    doc = dict(BASE_DOC, params=dict(BASE_DOC["params"], kappa=0.1))
    with pytest.raises(ConfigError, match="kappa"):
        njc.parse_scenario_config(_write_config(tmp_path, doc))

    doc = dict(BASE_DOC)
    del doc["t_end"]
    with pytest.raises(ConfigError, match="t_end"):
        njc.parse_scenario_config(_write_config(tmp_path, doc))

    with pytest.raises(ConfigError, match="spec_version"):
        njc.parse_scenario_config(
            _write_config(tmp_path, dict(BASE_DOC, spec_version=2))
        )

    doc = dict(BASE_DOC, params=dict(BASE_DOC["params"], omega=True))
    with pytest.raises(ConfigError, match="omega"):
        njc.parse_scenario_config(_write_config(tmp_path, doc))

    doc = dict(BASE_DOC)
    doc["initial_state"] = [[1.0, 0.0], [0.0, 0.0]]
    with pytest.raises(ConfigError):
        njc.parse_scenario_config(_write_config(tmp_path, doc))


def test_validation_checks_pass_on_presets():
    for name in ("fig1", "fig2"):
        results = njc.validation_checks(njc.preset(name).params)
        names = [r[0] for r in results]
        assert names == [
            "eigenpair residuals",
            "coefficient expansion",
            "closed-form identity",
            "solver deviation",
            "state sanity",
            "short-time rate",
        ]
        for check, passed, detail in results:
            assert passed, f"{check}: {detail}"


def test_validation_checks_catch_seeded_corruption(monkeypatch):
    monkeypatch.setenv("NJC_CORRUPT_LAMBDA", "1")
    results = njc.validation_checks(njc.preset("fig1").params)
    by_name = {name: passed for name, passed, _ in results}
    assert not by_name["eigenpair residuals"]
    del by_name["eigenpair residuals"]
    assert all(by_name.values())
