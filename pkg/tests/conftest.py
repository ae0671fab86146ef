"""Shared fixtures and hypothesis profile for the njc test suite."""

import pytest
from hypothesis import HealthCheck, settings

import njc

settings.register_profile(
    "njc",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("njc")

PRESET_NAMES = ("fig1", "fig2", "fig3", "fig4")


@pytest.fixture(scope="session")
def presets():
    return {name: njc.preset(name).params for name in PRESET_NAMES}


@pytest.fixture(scope="session")
def fig2_params(presets):
    return presets["fig2"]
