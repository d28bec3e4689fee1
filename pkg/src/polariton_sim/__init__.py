"""Spectral lineshapes and slow-light field transport in warm atomic vapor.

The package splits into closed-form spectroscopy (`lineshape`,
`ramsey`), a velocity-discretized reference solver (`kinetics`), field
evolution under diffraction and atomic diffusion (`fields`,
`propagator`, `storage`), and a Brownian walker engine (`mc`) backing
the repeated-interaction spectra. `cli` binds everything to the
`polariton-sim` executable.
"""

from .params import (
    BeamGeometry,
    DerivedParams,
    DriveParams,
    MediumParams,
    ParameterError,
    build_params,
    derive_params,
    load_params_file,
)

__version__ = "0.1.0"

__all__ = [
    "BeamGeometry",
    "DerivedParams",
    "DriveParams",
    "MediumParams",
    "ParameterError",
    "build_params",
    "derive_params",
    "load_params_file",
    "__version__",
]
