from __future__ import annotations

import math

import pytest

from polariton_sim.params import BeamGeometry, DriveParams, MediumParams

TWO_PI = 2.0 * math.pi


@pytest.fixture
def warm_vapor():
    """Buffer-gas cell in the diffusive regime (q*Lambda << 1)."""
    medium = MediumParams(
        gamma0=TWO_PI * 50.0,
        Gamma=TWO_PI * 3.0e6,
        gamma_c=4.0e8,
        v_T=170.0,
    )
    geom = BeamGeometry(q=TWO_PI / 794.7e-9, theta=5.0e-4)
    drive = DriveParams(Omega_c=TWO_PI * 1.5e5)
    return medium, geom, drive


@pytest.fixture
def params_file(tmp_path):
    """Factory writing a key=value file and returning its path."""

    def write(text, name="run.params"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return write
