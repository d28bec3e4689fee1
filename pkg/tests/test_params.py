from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polariton_sim.params import (
    FREQUENCY_KEYS,
    BeamGeometry,
    DriveParams,
    MediumParams,
    ParameterError,
    build_params,
    derive_params,
    load_params_file,
    scale_raw_params,
)

TWO_PI = 2.0 * math.pi


def test_medium_rejects_negative_rates():
    with pytest.raises(ParameterError):
        MediumParams(gamma0=-1.0, Gamma=1.0, gamma_c=0.0, v_T=100.0)
    with pytest.raises(ParameterError):
        MediumParams(gamma0=1.0, Gamma=1.0, gamma_c=0.0, v_T=0.0)


def test_geometry_default_k_is_law_of_cosines():
    q = TWO_PI / 780e-9
    theta = 1.0e-3
    geom = BeamGeometry(q=q, theta=theta)
    expected = math.sqrt(2.0 * q**2 * (1.0 - math.cos(theta)))
    # both routes cancel ~7 digits at mrad angles; compare what is left
    assert geom.k == pytest.approx(expected, rel=1e-9)
    # degenerate wavenumbers at small angle: k ~ q*theta
    assert geom.k == pytest.approx(q * theta, rel=1e-6)


def test_geometry_collinear_degenerate_k_is_zero():
    geom = BeamGeometry(q=1e7)
    assert geom.k == 0.0
    assert geom.raman_wavelength == math.inf


def test_geometry_counterpropagating_k_is_sum():
    q = 8.0e6
    geom = BeamGeometry(q=q, theta=math.pi)
    assert geom.k == pytest.approx(2.0 * q, rel=1e-12)


def test_derive_params_diffusive_chain(warm_vapor):
    medium, geom, drive = warm_vapor
    der = derive_params(medium, drive, geom)
    assert der.Lambda == pytest.approx(medium.v_T / medium.gamma_c)
    assert der.D == pytest.approx(medium.v_T**2 / medium.gamma_c)
    assert der.gammaP == pytest.approx(drive.Omega_c**2 / medium.Gamma)
    assert der.gamma == pytest.approx(medium.gamma0 + der.gammaP)
    assert der.k0 == pytest.approx(math.sqrt(der.gamma / der.D))
    assert der.diffusive


def test_derive_params_ballistic_medium():
    medium = MediumParams(gamma0=10.0, Gamma=1e6, gamma_c=0.0, v_T=170.0)
    der = derive_params(medium, DriveParams(Omega_c=0.0))
    assert not der.diffusive
    assert der.Lambda == math.inf and der.D == math.inf
    assert der.gammaP == 0.0
    assert der.k0 == 0.0


def test_load_params_file_scales_frequencies(params_file):
    path = params_file(
        """
        # comment line
        gamma0 = 100       # trailing comment
        Gamma = 1e6
        v_T = 170
        gamma_c = 2e8
        wavelength = 780e-9
        """
    )
    values = load_params_file(path)
    assert values["gamma0"] == pytest.approx(TWO_PI * 100.0)
    assert values["Gamma"] == pytest.approx(TWO_PI * 1e6)
    assert values["v_T"] == 170.0
    assert values["wavelength"] == 780e-9


def test_load_params_file_rejects_garbage(params_file):
    with pytest.raises(ParameterError):
        load_params_file(params_file("gamma0 100\n"))
    with pytest.raises(ParameterError):
        load_params_file(params_file("gamma0 = banana\n"))
    with pytest.raises(ParameterError):
        load_params_file(params_file("not_a_key = 1\n"))


def test_build_params_wavelength_and_D_spellings():
    values = scale_raw_params(
        {
            "gamma0": 50.0,
            "Gamma": 3e6,
            "Omega_c": 1e5,
            "v_T": 170.0,
            "D": 1.1e-3,
            "wavelength": 794.7e-9,
        }
    )
    medium, geom, drive = build_params(values)
    assert geom.q == pytest.approx(TWO_PI / 794.7e-9)
    assert medium.gamma_c == pytest.approx(170.0**2 / 1.1e-3)
    der = derive_params(medium, drive, geom)
    assert der.D == pytest.approx(1.1e-3, rel=1e-12)


def test_build_params_D_without_vT_fails():
    with pytest.raises(ParameterError):
        build_params({"q": 1e7, "D": 1e-3})


@given(
    key=st.sampled_from(FREQUENCY_KEYS),
    value=st.floats(
        min_value=1e-6, max_value=1e12, allow_nan=False, allow_infinity=False
    ),
)
def test_frequency_scaling_is_two_pi(key, value):
    assert scale_raw_params({key: value})[key] == pytest.approx(TWO_PI * value)
