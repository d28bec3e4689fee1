"""Figure-level acceptance checks, one criterion per test.

Each test prints a single ``criterion NN: PASS/FAIL`` line with the
measured numbers, then asserts. Run ``pytest -s tests/test_acceptance.py``
to see the lines; a plain ``pytest`` run still enforces every check.
Timed criteria fold their wall-clock budget into the pass condition.
"""

from __future__ import annotations

import math
import time
import warnings

import numpy as np
import pytest

from polariton_sim.fields import beam_metrics, square_grid
from polariton_sim.kinetics import VelocityGrid, oracle_spectrum
from polariton_sim.lineshape import (
    GAUSSIAN_FWHM,
    chi_dicke,
    chi_full_strong,
    chi_one_photon_strong,
    chi_one_photon_weak,
    chi_raman_weak,
    dicke_emitter_spectrum,
    fwhm,
    lorentzian_fit,
)
from polariton_sim.params import (
    BeamGeometry,
    DriveParams,
    MediumParams,
    derive_params,
)
from polariton_sim.propagator import (
    PropagationPlan,
    atomic_diffusivity,
    centroid_drift,
    propagate,
)
from polariton_sim.ramsey import (
    RamseyGeometry,
    ramsey_correction,
    simulate_repeated_interaction,
    universal_spectrum,
)
from polariton_sim.storage import ModeSpec, StorageRun, elegant_evolution, evolve_stored, make_mode

TWO_PI = 2.0 * math.pi
V_T = 170.0
Q780 = TWO_PI / 780e-9
Q795 = TWO_PI / 794.7e-9


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def _medium_for(q_lambda: float, Gamma: float) -> MediumParams:
    gamma_c = V_T * Q780 / q_lambda
    return MediumParams(gamma0=0.0, Gamma=Gamma, gamma_c=gamma_c, v_T=V_T)


def _fwhm_interp(x: np.ndarray, y: np.ndarray) -> float:
    """Full width at half maximum against a zero baseline, interpolated."""
    half = 0.5 * y.max()
    above = np.where(y >= half)[0]
    lo, hi = above[0], above[-1]
    assert 0 < lo and hi < x.size - 1

    def cross(j, k):
        return x[j] + (half - y[j]) * (x[k] - x[j]) / (y[k] - y[j])

    return cross(hi, hi + 1) - cross(lo, lo - 1)


def _gaussian_field(n, extent, w0):
    grid = square_grid(n, extent)
    x, y = grid.mesh()
    return grid.with_data(np.exp(-(x**2 + y**2) / w0**2).astype(complex))


def test_c01_thermal_width_of_a_room_temperature_line():
    width_hz = V_T * Q780 / TWO_PI
    rel = abs(width_hz / 220e6 - 1.0)
    _report(1, rel < 0.02, f"1-sigma width {width_hz/1e6:.1f} MHz vs 220 MHz, rel {rel:.4f}")


def test_c02_weak_collision_line_recovers_both_motional_limits():
    t0 = time.perf_counter()
    # many wavelengths per flight: Gaussian of thermal width
    medium = _medium_for(100.0, Gamma=1e3)
    geom = BeamGeometry(q=Q780)
    sigma = V_T * Q780
    deltas = np.linspace(-4.0 * sigma, 4.0 * sigma, 801)
    width = fwhm(deltas, np.imag(chi_one_photon_weak(deltas, medium, geom)))
    rel_g = abs(width / (GAUSSIAN_FWHM * sigma) - 1.0)
    # many collisions per wavelength: narrowed Lorentzian
    Gamma = TWO_PI * 1e3
    medium = _medium_for(0.01, Gamma=Gamma)
    hwhm_expected = Gamma + sigma**2 / medium.gamma_c
    deltas = np.linspace(-8.0 * hwhm_expected, 8.0 * hwhm_expected, 801)
    fit = lorentzian_fit(deltas, np.imag(chi_one_photon_weak(deltas, medium, geom)))
    rel_l = abs(fit["hwhm"] / hwhm_expected - 1.0)
    dt = time.perf_counter() - t0
    ok = rel_g < 0.01 and rel_l < 0.01 and dt < 10.0
    _report(2, ok, f"Gaussian rel {rel_g:.2e}, Lorentzian rel {rel_l:.2e}, {dt:.1f} s")


def test_c03_strong_collision_model_deviates_only_at_crossover():
    t0 = time.perf_counter()
    geom = BeamGeometry(q=Q780)
    sigma = V_T * Q780
    limit_devs = []
    for q_lambda in (1e-2, 1e2):
        medium = _medium_for(q_lambda, Gamma=TWO_PI * 1e5)
        hw = medium.Gamma + sigma**2 / medium.gamma_c
        span = 2.0 * min(sigma, hw) * 2.0
        deltas = np.linspace(-span, span, 9)
        weak = np.imag(chi_one_photon_weak(deltas, medium, geom))
        strong = np.imag(chi_one_photon_strong(deltas, medium, geom))
        limit_devs.append(np.max(np.abs(strong - weak)) / weak.max())
    medium = _medium_for(1.0, Gamma=TWO_PI * 1e5)
    deltas = np.linspace(-2.0, 2.0, 21) * sigma
    weak = np.imag(chi_one_photon_weak(deltas, medium, geom))
    strong = np.imag(chi_one_photon_strong(deltas, medium, geom))
    mid_dev = np.max(np.abs(strong - weak)) / weak.max()
    dt = time.perf_counter() - t0
    ok = max(limit_devs) < 0.02 and 0.05 < mid_dev < 0.25 and dt < 30.0
    _report(3, ok, f"limit devs {limit_devs[0]:.2e}/{limit_devs[1]:.2e}, crossover dev {mid_dev:.3f}, {dt:.1f} s")


def test_c04_two_photon_line_is_the_substituted_one_photon_line():
    medium = MediumParams(gamma0=TWO_PI * 50.0, Gamma=TWO_PI * 3e6, gamma_c=4e8, v_T=V_T)
    geom = BeamGeometry(q=Q795, theta=5e-4)
    deltas = np.linspace(-TWO_PI * 2e4, TWO_PI * 2e4, 9)
    raman = chi_raman_weak(deltas, medium, geom)
    substituted = chi_one_photon_weak(
        -deltas,
        MediumParams(
            gamma0=0.0,
            Gamma=medium.gamma0,
            gamma_c=medium.gamma_c,
            v_T=medium.v_T,
            g=medium.g,
        ),
        BeamGeometry(q=geom.k),
    )
    rel = np.max(np.abs(medium.Gamma**2 * raman - substituted) / np.abs(substituted))
    _report(4, rel < 5e-14, f"substitution symmetry rel {rel:.2e} (tol 5e-14)")


def test_c05_velocity_resolved_solver_confirms_the_closed_form():
    t0 = time.perf_counter()
    medium = MediumParams(
        gamma0=TWO_PI * 100.0, Gamma=TWO_PI * 3.0e6, gamma_c=V_T * Q780, v_T=V_T
    )
    geom = BeamGeometry(q=Q780)
    drive = DriveParams(Omega_c=TWO_PI * 4.0e5)
    grid = VelocityGrid.build(medium.v_T, nodes=201)
    dps = np.linspace(-1.0, 1.0, 5) * TWO_PI * 2e5
    dds = np.linspace(-2.0, 2.0, 5) * TWO_PI * 2e5
    worst = 0.0
    with warnings.catch_warnings():
        # grid-resolution advisories are exercised in the unit suite
        warnings.simplefilter("ignore", UserWarning)
        for dp in dps:
            closed = chi_full_strong(dp, dds, medium, geom, drive)
            solved = oracle_spectrum(dds, medium, geom, drive, grid, Delta_p=dp)
            worst = max(worst, float(np.max(np.abs(solved - closed)) / np.max(np.abs(closed))))
    dt = time.perf_counter() - t0
    ok = worst < 1e-3 and dt < 60.0
    _report(5, ok, f"worst rel dev {worst:.2e} on 5x5 grid, {dt:.1f} s")


def test_c06_dark_line_width_is_the_diffusion_shifted_rate(warm_vapor):
    medium, geom, drive = warm_vapor
    der = derive_params(medium, drive, geom)
    hw = der.gamma + der.D * geom.k**2
    pref = 1j * medium.g / complex(medium.Gamma)
    dip0 = (pref - chi_dicke(0.0, geom.k, medium, drive)).imag
    diph = (pref - chi_dicke(hw, geom.k, medium, drive)).imag
    half_err = abs(diph / dip0 - 0.5)
    # small-angle arrangement: 0.5 mrad between beams, 2 um free flight
    Lam = 2e-6
    narrow_med = MediumParams(gamma0=0.0, Gamma=TWO_PI * 3e6, gamma_c=V_T / Lam, v_T=V_T)
    k = BeamGeometry(q=Q795, theta=0.5e-3).k
    broadening_hz = atomic_diffusivity(narrow_med) * k**2 / TWO_PI
    factor = 2000.0 / broadening_hz
    ok = half_err < 1e-12 and 1.0 / 3.0 < factor < 3.0
    _report(6, ok, f"half depth err {half_err:.1e}, residual width {broadening_hz:.1f} Hz vs 2 kHz (factor {factor:.2f})")


def test_c07_group_delay_scale_from_handbook_diffusivity():
    medium = MediumParams(gamma0=TWO_PI * 50.0, Gamma=TWO_PI * 3e6, gamma_c=V_T**2 / 1.1e-3, v_T=V_T)
    qD = Q795 * atomic_diffusivity(medium)
    rel = abs(qD / 8700.0 - 1.0)
    _report(7, rel < 0.02, f"q*D = {qD:.1f} m/s vs 8700 m/s, rel {rel:.4f}")


def test_c08_matched_group_velocity_freezes_a_fine_beam():
    t0 = time.perf_counter()
    medium = MediumParams(gamma0=TWO_PI * 50.0, Gamma=TWO_PI * 3.0e6, gamma_c=V_T**2 / 1.1e-3, v_T=V_T)
    geom = BeamGeometry(q=Q795)
    drive = DriveParams(Omega_c=TWO_PI * 1.5e5)
    der = derive_params(medium, drive, geom)
    w0 = 1.0e-4
    L = 0.05
    fld = _gaussian_field(512, 16.0 * w0, w0)
    free = propagate(
        fld,
        PropagationPlan(medium=medium, geom=geom, drive=drive, Delta=0.0, L=L, chi_mode="free-space"),
    )
    with warnings.catch_warnings():
        # the expansion-strain advisory is asserted in the unit suite
        warnings.simplefilter("ignore", UserWarning)
        matched = propagate(
            fld,
            PropagationPlan(
                medium=medium, geom=geom, drive=drive, Delta=-der.gamma, L=L,
                chi_mode="quadratic", v_g=geom.q * der.D,
            ),
        )
        anti = propagate(
            fld,
            PropagationPlan(
                medium=medium, geom=geom, drive=drive, Delta=+der.gamma, L=L,
                chi_mode="quadratic", v_g=geom.q * der.D,
            ),
        )
    doubled = propagate(
        fld,
        PropagationPlan(medium=medium, geom=geom, drive=drive, Delta=0.0, L=2.0 * L, chi_mode="free-space"),
    )
    r0 = beam_metrics(fld)["rms_radius"]
    growth = beam_metrics(free.output)["rms_radius"] / r0
    frozen = abs(beam_metrics(matched.output)["rms_radius"] / r0 - 1.0)
    a = anti.output.normalized()
    d = doubled.output.normalized()
    l2 = math.sqrt(float(np.sum(np.abs(a.data - d.data) ** 2)) * a.dx * a.dy)
    dt = time.perf_counter() - t0
    ok = growth > 1.2 and frozen < 0.02 and l2 < 1e-3 and dt < 30.0
    _report(8, ok, f"free growth {growth:.3f}, matched change {frozen:.2e}, mirror-detuning L2 {l2:.1e}, {dt:.1f} s at 512^2")


def test_c09_tilted_coupling_beam_drags_the_centroid():
    medium = MediumParams(gamma0=TWO_PI * 50.0, Gamma=TWO_PI * 3.0e6, gamma_c=V_T**2 / 1.1e-3, v_T=V_T)
    geom = BeamGeometry(q=Q795)
    drive = DriveParams(Omega_c=TWO_PI * 1.5e5)
    der = derive_params(medium, drive, geom)
    theta_c = 2.0e-4
    fld = _gaussian_field(256, 16.0e-4, 1.0e-4)
    plan = PropagationPlan(
        medium=medium, geom=geom, drive=drive, Delta=-der.gamma, L=0.05,
        chi_mode="quadratic", theta_c=theta_c, v_g=geom.q * der.D,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        result = propagate(fld, plan)
    angle = centroid_drift(fld, result.output, plan)["angle"][0]
    rel = abs(angle / theta_c - 1.0)
    _report(9, rel < 0.05, f"centroid angle {angle:.3e} rad vs {theta_c:.1e} rad, rel {rel:.2e}")


def test_c10_stored_mode_power_follows_the_order_law():
    w0 = 1.0e-4
    D = 1.0e-4
    grid = square_grid(192, 10.0 * w0)

    def tau_for(s):
        return (s**2 - 1.0) * w0**2 / (4.0 * D)

    tau_r2 = tau_for(math.sqrt(2.0))
    (g_out,) = evolve_stored(
        StorageRun(initial=make_mode(ModeSpec("sHG", 0, 0, w0=w0), grid), D=D, gamma0=0.0, taus=(tau_r2,))
    )
    g_err = abs(g_out.power - 0.5)
    (e_out,) = evolve_stored(
        StorageRun(initial=make_mode(ModeSpec("eHG", 1, 1, w0=w0), grid), D=D, gamma0=0.0, taus=(tau_r2,))
    )
    e_err = abs(e_out.power - 0.125)
    taus = tuple(tau_for(s) for s in (1.15, 1.3, 1.5, 1.75, 2.0))
    s_vals = np.sqrt(1.0 + 4.0 * D * np.asarray(taus) / w0**2)
    slope_err = 0.0
    for n, m in [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)]:
        run = StorageRun(initial=make_mode(ModeSpec("eHG", n, m, w0=w0), grid), D=D, gamma0=0.0, taus=taus)
        powers = [f.power for f in evolve_stored(run)]
        slope = np.polyfit(np.log(s_vals), np.log(powers), 1)[0]
        slope_err = max(slope_err, abs(slope / (-2.0 * (n + m + 1)) - 1.0))
    mode = make_mode(ModeSpec("eHG", 2, 1, w0=w0), grid)
    (num,) = evolve_stored(StorageRun(initial=mode, D=D, gamma0=25.0, taus=(tau_for(1.3),)))
    ref = elegant_evolution(2, 1, w0, tau_for(1.3), D, gamma0=25.0, grid=grid)
    l2 = math.sqrt(float(np.sum(np.abs(num.data - ref["field"].data) ** 2)) * grid.dx * grid.dy)
    ok = g_err < 1e-3 and e_err < 1e-3 and slope_err < 0.01 and l2 <= 1e-3
    _report(10, ok, f"Gaussian err {g_err:.1e}, order-2 err {e_err:.1e}, worst exponent err {slope_err:.2e}, closed-form L2 {l2:.1e}")


def test_c11_vortex_core_survives_where_a_plain_ring_fills():
    w0 = 1.0e-4
    D = 1.0e-4
    grid = square_grid(192, 10.0 * w0)
    vortex = make_mode(ModeSpec("sLG", 0, 1, w0=w0), grid)
    ring = grid.with_data(np.abs(vortex.data).astype(complex))
    tau = (2.0 - 1.0) * w0**2 / (4.0 * D)
    (v_out,) = evolve_stored(StorageRun(initial=vortex, D=D, gamma0=0.0, taus=(tau,)))
    (r_out,) = evolve_stored(StorageRun(initial=ring, D=D, gamma0=0.0, taus=(tau,)))
    v_core = beam_metrics(v_out)["core_intensity"]
    r_core = beam_metrics(r_out)["core_intensity"]
    ok = v_core < 1e-4 and r_core >= 0.5
    _report(11, ok, f"vortex core {v_core:.1e}, phase-stripped core {r_core:.2f}")


def test_c12_converging_stored_mode_contracts_before_spreading():
    w0 = 1.0e-4
    D = 1.0e-4
    z_R = Q795 * w0**2 / 2.0
    mode = make_mode(ModeSpec("sHG", 0, 0, w0=w0, z=2.0 * z_R, q=Q795), square_grid(256, 24.0 * w0))
    area0 = beam_metrics(mode)["rms_radius"] ** 2
    outs = evolve_stored(StorageRun(initial=mode, D=D, gamma0=0.0, taus=(1e-5, 3e-5, 2e-4)))
    areas = [beam_metrics(f)["rms_radius"] ** 2 for f in outs]
    ok = areas[0] < 0.95 * area0 and areas[1] < area0 and areas[2] > area0
    _report(12, ok, f"area ratios {areas[0]/area0:.3f}, {areas[1]/area0:.3f}, {areas[2]/area0:.3f} (dip then recovery)")


def test_c13_repeated_interactions_narrow_below_the_pump_rate():
    t0 = time.perf_counter()
    # walls at the beam edge: single-pass transit factor, no re-entries
    a, Ddiff = 1e-4, 1e-3
    g0, gP = TWO_PI * 1000.0, TWO_PI * 20000.0
    transit = RamseyGeometry(1, a, a, Ddiff, g0, gP)
    trans_err = 0.0
    for delta in (0.0, TWO_PI * 3000.0, TWO_PI * 40000.0):
        kappa = np.sqrt((g0 + gP - 1j * delta) / Ddiff)
        expected = np.tanh(kappa * a) / (kappa * a)
        got = ramsey_correction(delta, transit)
        trans_err = max(trans_err, abs(got - expected) / abs(expected))
    # open geometry: returns narrow the central feature below 2 gammaP
    geom = RamseyGeometry(2, a, math.inf, Ddiff, g0, gP)
    span = 10 * gP
    delta_scan = np.linspace(-span, span, 80001)
    R = ramsey_correction(delta_scan, geom)
    p = gP * np.real((1.0 - R) / (g0 + gP - 1j * delta_scan))
    closed_width = _fwhm_interp(delta_scan, p)
    # random walkers, same measurement applied to the sampled spectrum
    mc_deltas = np.linspace(-3.0 * gP, 3.0 * gP, 61)
    r = simulate_repeated_interaction(
        geom, mc_deltas, walkers=100_000, dt=a**2 / (20.0 * Ddiff), seed=2026
    )
    mc_width = _fwhm_interp(mc_deltas, np.real(r.spectrum))
    ratio = mc_width / closed_width
    dt = time.perf_counter() - t0
    ok = (
        trans_err < 1e-12
        and closed_width < 2.0 * gP
        and abs(ratio - 1.0) < 0.10
        and dt < 120.0
    )
    _report(13, ok, f"transit err {trans_err:.1e}, closed width {closed_width/(2*gP):.4f} x 2gammaP, walker/closed ratio {ratio:.4f}, {dt:.1f} s ({r.backend})")


def test_c14_open_cell_tail_and_first_return_scaling():
    t0 = time.perf_counter()
    g0, Dd, ell = 50.0, 1e-3, 1e-5
    Delta = np.geomspace(10 * g0, 1000 * g0, 121)
    S = universal_spectrum(Delta, Dd, g0, ell)
    slope = np.polyfit(np.log(Delta), np.log(np.abs(S)), 1)[0]
    lor = 1.0 / (g0 + 1j * Delta)
    lor_slope = np.polyfit(np.log(Delta), np.log(np.abs(lor)), 1)[0]
    # sampled first-return transform against its square-root law
    g0mc = 2000.0
    geom = RamseyGeometry(1, 2e-5, math.inf, 1e-3, g0mc, 10 * g0mc)
    r = simulate_repeated_interaction(geom, np.array([0.0]), walkers=2000, dt=4e-9, seed=5)
    s = np.geomspace(g0mc, 100 * g0mc, 9)
    phat = r.stats.empirical_laplace(s.astype(complex), kind="out")[0].real
    shortfall = 1.0 - phat
    ell_fit = shortfall[4] / math.sqrt(s[4] / geom.D)
    law = ell_fit * np.sqrt(s / geom.D)
    mc_dev = float(np.max(np.abs(shortfall / law - 1.0)))
    dt = time.perf_counter() - t0
    ok = abs(slope + 0.50) < 0.02 and abs(lor_slope + 1.00) < 0.02 and mc_dev < 0.05
    _report(14, ok, f"tail slope {slope:.3f} (Lorentzian ref {lor_slope:.3f}), first-return dev {mc_dev:.3f}, {dt:.1f} s")


def test_c15_single_emitter_satellites_collapse_onto_the_carrier():
    qv = Q780 * V_T
    spec = dicke_emitter_spectrum(v=V_T, q=Q780, duration=4e-7, dt=2e-10, seed=11)
    psd = spec.chi.real
    df = spec.detunings[1] - spec.detunings[0]
    peak = spec.detunings[np.argmax(psd)]
    off_bins = min(abs(peak - qv), abs(peak + qv)) / df
    churned = dicke_emitter_spectrum(
        v=V_T, q=Q780, collision_rate=50.0 * qv, duration=4e-7, dt=2e-10, seed=11
    )
    inside = np.abs(churned.detunings) <= 0.2 * qv
    frac = float(churned.chi.real[inside].sum() / churned.chi.real.sum())
    ok = off_bins <= 1.0 and frac >= 0.80
    _report(15, ok, f"free-flight satellite off by {off_bins:.2f} bins, carrier fraction {frac:.3f} at 50 q v")
