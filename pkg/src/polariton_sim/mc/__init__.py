"""Walker-simulation backends.

Two interchangeable kernels simulate the same Brownian bright/dark
interval process: a compiled one (Cython, built at install time when a
toolchain is available) and a pure-numpy fallback. Both consume
identical Philox4x32 uniform streams addressed by (step, walker), so
each backend is bit-deterministic for a fixed seed; across backends the
streams agree bitwise while derived floats may differ in final ulps, so
trajectories agree statistically rather than bit for bit.

select_backend() resolves, in order: an explicit argument, the
POLARITON_SIM_MC_BACKEND environment variable ("cython" or "numpy"),
then "cython" when the extension imports and "numpy" otherwise.
"""

from __future__ import annotations

import os

from . import reference
from .reference import END_BRIGHT, END_DARK, END_WALL

try:
    from . import _walk

    _HAVE_COMPILED = True
except ImportError:
    _walk = None
    _HAVE_COMPILED = False

BACKENDS = ("auto", "cython", "numpy")

__all__ = [
    "BACKENDS",
    "END_BRIGHT",
    "END_DARK",
    "END_WALL",
    "backend_name",
    "compiled_available",
    "select_backend",
    "simulate_walkers",
]


def compiled_available() -> bool:
    return _HAVE_COMPILED


def select_backend(backend: str = "auto") -> str:
    """Resolve a backend request to "cython" or "numpy"."""
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}")
    if backend == "auto":
        backend = os.environ.get("POLARITON_SIM_MC_BACKEND", "auto")
        if backend not in BACKENDS:
            raise ValueError(
                "POLARITON_SIM_MC_BACKEND must be 'cython', 'numpy', or 'auto'"
            )
    if backend == "auto":
        return "cython" if _HAVE_COMPILED else "numpy"
    if backend == "cython" and not _HAVE_COMPILED:
        raise RuntimeError("compiled walker kernel is not available in this install")
    return backend


def backend_name() -> str:
    """The backend an unconstrained run would use right now."""
    return select_backend("auto")


def simulate_walkers(
    dim: int,
    a: float,
    b: float,
    D: float,
    t_max: float,
    dt_base: float,
    eta: float,
    n_walkers: int,
    seed: int,
    backend: str = "auto",
):
    """Dispatch one walk to the chosen backend.

    Returns (durations, offsets, end_codes); see reference.simulate_walkers
    for the layout contract shared by both kernels.
    """
    chosen = select_backend(backend)
    if chosen == "cython":
        return _walk.simulate_walkers(
            dim, a, b, D, t_max, dt_base, eta, n_walkers, seed
        )
    return reference.simulate_walkers(
        dim, a, b, D, t_max, dt_base, eta, n_walkers, seed
    )
