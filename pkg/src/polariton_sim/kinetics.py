"""Velocity-discretized steady-state solver for the single-rate collision
kernel, used as an independent cross-check of the closed-form two-field
susceptibility.

The velocity dependence of the two coherences is kept explicitly on a
Gauss-Hermite grid. At each node the stationary transport equations are a
2x2 complex linear system driven by the velocity-integrated coherences
(the thermalizing kernel returns atoms with a Maxwell-Boltzmann spread,
so only the integrals feed back). Solving the per-node systems for a
trial pair of integrated coherences gives an affine map; imposing
self-consistency closes it with one more exact 2x2 solve. No Faddeeva
algebra is involved anywhere, which makes this an honest oracle for the
analytic route in `lineshape`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_hermite

from .params import BeamGeometry, DriveParams, MediumParams, ParameterError

SQRT2 = math.sqrt(2.0)


@dataclass
class VelocityGrid:
    """Gauss-Hermite velocity grid scaled to thermal speed v_T.

    axes=1 puts all nodes along the probe axis (collinear residual
    wavenumber); axes=2 adds a perpendicular axis for the small-angle
    geometry. v_q and v_k are the node velocity components along the
    probe wavevector and along the residual (two-photon) wavevector;
    weights are normalized to sum to exactly 1.
    """

    axes: int
    nodes: int
    v_T: float
    v_q: np.ndarray
    v_k: np.ndarray
    weights: np.ndarray
    spacing: float

    @classmethod
    def build(cls, v_T: float, axes: int = 1, nodes: int | None = None) -> "VelocityGrid":
        if axes not in (1, 2):
            raise ParameterError("axes must be 1 or 2")
        # 161 is the smallest odd count whose central spacing clears the
        # v_T/4 resolution bound enforced below, hence the 2-axis default
        if nodes is None:
            nodes = 201 if axes == 1 else 161
        if nodes % 2 == 0:
            raise ParameterError("node count must be odd (center node at v=0)")
        if v_T <= 0:
            raise ParameterError("v_T must be positive")
        # scipy's Golub-Welsch route stays finite at node counts where the
        # numpy polynomial recurrence overflows
        x, w = roots_hermite(nodes)
        vel = x * SQRT2 * v_T
        w = w / w.sum()
        center = nodes // 2
        spacing = vel[center + 1] - vel[center]
        if not spacing < v_T / 4.0:
            raise ParameterError(
                f"grid too coarse: central node spacing {spacing:.3g} m/s "
                f"does not resolve the thermal spread (need < v_T/4 = {v_T / 4:.3g})"
            )
        if axes == 1:
            return cls(
                axes=1,
                nodes=nodes,
                v_T=v_T,
                v_q=vel,
                v_k=vel,
                weights=w,
                spacing=spacing,
            )
        vq = np.repeat(vel, nodes)
        vk = np.tile(vel, nodes)
        ww = np.outer(w, w).ravel()
        ww = ww / ww.sum()
        return cls(
            axes=2, nodes=nodes, v_T=v_T, v_q=vq, v_k=vk, weights=ww, spacing=spacing
        )


def solve_velocity_resolved(
    Delta_p: float,
    Delta: float,
    medium: MediumParams,
    geom: BeamGeometry,
    drive: DriveParams,
    grid: VelocityGrid,
    return_node_solution: bool = False,
):
    """Steady-state susceptibility from the node-resolved transport solve.

    Per node v the optical and Raman coherence densities h = (h31, h21)
    (with the Maxwell-Boltzmann factor divided out) obey

        [[i dp(v), i Omega_c], [i Omega_c, i d(v)]] h
            = [-(gamma_c r1 + i Omega), -gamma_c r2]

    with dp(v) = Delta_p - q v_q + i(Gamma + gamma_c) and
    d(v) = Delta - k v_k + i(gamma0 + gamma_c), driven by the integrated
    coherences r = (r1, r2). The batched LU solves against the constant
    drive and the two unit feedback channels yield the affine map
    r -> weights . h; its fixed point is obtained from one exact 2x2
    solve. Returns chi = g r1 / Omega [1/m], or (chi, nodes31, nodes21)
    when return_node_solution is set (node values include the weights, so
    they sum to r).
    """
    W1 = medium.Gamma + medium.gamma_c
    W2 = medium.gamma0 + medium.gamma_c
    if not (W1 > 0 and W2 > 0):
        raise ParameterError("need Gamma + gamma_c > 0 and gamma0 + gamma_c > 0")
    q, k = geom.q, geom.k
    if W1 < 2.0 * q * grid.spacing or (k > 0 and W2 < 2.0 * k * grid.spacing):
        warnings.warn(
            "velocity grid may not resolve the narrowest rate; "
            "refine nodes or broaden the rates",
            stacklevel=2,
        )

    dp = Delta_p - q * grid.v_q + 1j * W1
    d = Delta - k * grid.v_k + 1j * W2
    n = grid.weights.size
    Om = drive.Omega_c
    probe = 1.0  # linear response: the probe Rabi frequency divides out

    M = np.empty((n, 2, 2), dtype=complex)
    M[:, 0, 0] = 1j * dp
    M[:, 0, 1] = 1j * Om
    M[:, 1, 0] = 1j * Om
    M[:, 1, 1] = 1j * d

    # three right-hand sides: constant probe drive, feedback of r1, of r2
    rhs = np.zeros((n, 2, 3), dtype=complex)
    rhs[:, 0, 0] = -1j * probe
    rhs[:, 0, 1] = -medium.gamma_c
    rhs[:, 1, 2] = -medium.gamma_c
    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            "singular node system in velocity-resolved solve "
            "(unreachable for positive damping)"
        ) from exc

    integ = np.einsum("i,ijk->jk", grid.weights, sol)
    c = integ[:, 0]
    A = integ[:, 1:]
    try:
        r = np.linalg.solve(np.eye(2) - A, c)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            "singular closure system in velocity-resolved solve "
            "(unreachable for positive damping)"
        ) from exc

    chi = medium.g * r[0] / probe
    if return_node_solution:
        h = sol[:, :, 0] + sol[:, :, 1] * r[0] + sol[:, :, 2] * r[1]
        nodes = grid.weights[:, None] * h
        return complex(chi), nodes[:, 0], nodes[:, 1]
    return complex(chi)


def oracle_spectrum(
    Delta: np.ndarray,
    medium: MediumParams,
    geom: BeamGeometry,
    drive: DriveParams,
    grid: VelocityGrid | None = None,
    Delta_p: float | None = None,
) -> np.ndarray:
    """Map solve_velocity_resolved over a detuning array.

    Delta is the two-photon detuning scan; the one-photon detuning is
    held at drive.Delta_p unless overridden. Builds a default collinear
    201-node grid when none is given.
    """
    if grid is None:
        grid = VelocityGrid.build(medium.v_T, axes=1)
    dp = drive.Delta_p if Delta_p is None else Delta_p
    out = np.empty(np.shape(Delta), dtype=complex)
    flat = out.reshape(-1)
    for i, dd in enumerate(np.asarray(Delta, dtype=float).reshape(-1)):
        flat[i] = solve_velocity_resolved(dp, float(dd), medium, geom, drive, grid)
    return out
