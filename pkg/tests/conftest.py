"""Shared fixtures: small run configurations that keep the suite fast."""

import pytest

from setfoil import RunConfig


@pytest.fixture
def small_config():
    """A quick end-to-end configuration (seconds, not minutes)."""
    return RunConfig(
        seed=7,
        n_initial=64,
        stage2_top_k=16,
        stage3_base_n=32,
        stage5_top_k=6,
    )


@pytest.fixture
def fixed_clock():
    """Injectable clock returning one constant timestamp."""
    return lambda: "2026-01-01T00:00:00.000+00:00"
