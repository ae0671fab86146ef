"""Acceptance: the full plot pipeline over every bundled preset export.

Renders all four preset trajectories with envelopes armed, so the
recomputed floor is checked against each curve's minima at the 1e-3
tripwire, and confirms that malformed input is rejected rather than
drawn.
"""

import pytest

from njc_plots import (
    MalformedCsv,
    PlotSpec,
    check_envelope,
    read_trajectory,
    render,
    require_params,
)

MIN_IMAGE_BYTES = 1024


def test_pipeline_renders_all_presets(tmp_path, exports_dir):
    for n in (1, 2, 3, 4):
        csv = exports_dir / f"fig{n}.csv"
        table = read_trajectory(csv)
        worst = check_envelope(table, require_params(table))
        png, svg = render(PlotSpec(
            sources=(csv,),
            output=tmp_path / f"fig{n}.png",
            envelopes=True,
        ))
        print(f"fig{n}: envelope gap {worst:.3e} (<=1e-3), "
              f"png {png.stat().st_size}B, svg {svg.stat().st_size}B")
        assert worst <= 1e-3
        assert png.stat().st_size > MIN_IMAGE_BYTES
        assert svg.stat().st_size > MIN_IMAGE_BYTES


def test_pipeline_rejects_malformed_csv(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,pe_analytic\n0,1\n0.5,0.99\n1.0,broken\n")
    with pytest.raises(MalformedCsv):
        render(PlotSpec(sources=(bad,), output=tmp_path / "bad.png"))
    assert not (tmp_path / "bad.png").exists()
