"""Fixtures produced by driving the installed simulator CLI.

The renderer consumes the simulator's file interface, so the tests build
their inputs the same way a user would: by running ``njc figure``.
"""

import shutil
import subprocess
import sys

import pytest

PRESET_NUMBERS = (1, 2, 3, 4)


def _njc_command():
    exe = shutil.which("njc")
    if exe:
        return [exe]
    return [sys.executable, "-m", "njc.cli"]


@pytest.fixture(scope="session")
def exports_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("exports")
    for n in PRESET_NUMBERS:
        proc = subprocess.run(
            [*_njc_command(), "figure", str(n), "--out", str(out)],
            capture_output=True,
            text=True,
            timeout=300,
        )
        assert proc.returncode == 0, proc.stderr
    return out


@pytest.fixture(scope="session")
def fig3_csv(exports_dir):
    return exports_dir / "fig3.csv"
