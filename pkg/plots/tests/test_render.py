"""Figure rendering, determinism, the envelope tripwire, and the CLI."""

import json
import shutil

import pytest

from njc_plots import (
    EnvelopeMismatch,
    PlotSpec,
    check_envelope,
    read_trajectory,
    render,
    require_params,
)
from njc_plots.cli import main

# Anything smaller than a kilobyte is an empty or broken image.
MIN_IMAGE_BYTES = 1024


def test_render_single_run(tmp_path, fig3_csv):
    png, svg = render(PlotSpec(
        sources=(fig3_csv,),
        output=tmp_path / "fig3.png",
        envelopes=True,
        title="incomplete decay",
    ))
    assert png.exists() and png.stat().st_size > MIN_IMAGE_BYTES
    assert svg.exists() and svg.stat().st_size > MIN_IMAGE_BYTES
    assert svg.read_bytes().startswith(b"<?xml")


def test_render_is_deterministic(tmp_path, fig3_csv):
    spec_a = PlotSpec(sources=(fig3_csv,), output=tmp_path / "a.png", envelopes=True)
    spec_b = PlotSpec(sources=(fig3_csv,), output=tmp_path / "b.png", envelopes=True)
    png_a, svg_a = render(spec_a)
    png_b, svg_b = render(spec_b)
    assert png_a.read_bytes() == png_b.read_bytes()
    assert svg_a.read_bytes() == svg_b.read_bytes()


def test_render_overlay_of_two_runs(tmp_path, exports_dir):
    png, svg = render(PlotSpec(
        sources=(exports_dir / "fig1.csv", exports_dir / "fig4.csv"),
        output=tmp_path / "pair.png",
        overlay=False,
    ))
    assert png.exists() and svg.exists()


def test_tripwire_passes_on_honest_export(fig3_csv):
    table = read_trajectory(fig3_csv)
    worst = check_envelope(table, require_params(table))
    # dt = 0.5 sampling leaves a visible but sub-tolerance gap.
    assert worst <= 1e-3


def test_tripwire_catches_stale_sidecar(tmp_path, fig3_csv):
    shutil.copy(fig3_csv, tmp_path / "doctored.csv")
    meta = json.loads(fig3_csv.with_suffix(".meta.json").read_text())
    meta["params"]["chi"] = 0.0
    (tmp_path / "doctored.meta.json").write_text(json.dumps(meta))
    with pytest.raises(EnvelopeMismatch, match="doctored.csv"):
        render(PlotSpec(
            sources=(tmp_path / "doctored.csv",),
            output=tmp_path / "doctored.png",
            envelopes=True,
        ))
    assert not (tmp_path / "doctored.png").exists()


def test_cli_render(tmp_path, fig3_csv, capsys):
    rc = main([
        "--csv", str(fig3_csv),
        "--out", str(tmp_path / "out.png"),
        "--envelopes",
        "--title", "fig3",
    ])
    assert rc == 0
    out = capsys.readouterr().out
    assert "wrote" in out
    assert (tmp_path / "out.png").exists()
    assert (tmp_path / "out.svg").exists()


def test_cli_reports_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,pe_analytic\n0,huh\n")
    rc = main(["--csv", str(bad), "--out", str(tmp_path / "x.png")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err
    rc = main(["--csv", str(tmp_path / "absent.csv"), "--out", str(tmp_path / "x.png")])
    assert rc == 1


def test_cli_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["--out", "x.png"])
    assert exc.value.code == 2
