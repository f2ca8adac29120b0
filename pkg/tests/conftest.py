"""
Shared fixtures for the FluxCoupler test suite.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.config import PROJECT_ROOT, SolverConfig
from src.models import load_device


@pytest.fixture(scope="session")
def device():
    """Bundled semi-classical device parameters."""
    return load_device(PROJECT_ROOT / "data" / "devices" / "reference_semiclassical.json")


@pytest.fixture(scope="session")
def fast_settings():
    """Coarse truncation that keeps circuit solves in the millisecond range."""
    return SolverConfig(
        qubit_levels=8,
        coupler_levels=60,
        composite_levels=3,
        interpolation_nodes=5,
        check_convergence=False,
        verify_truncation=False,
    )
