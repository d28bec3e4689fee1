"""One-photon and Raman susceptibility spectra across the Doppler-Dicke
transition, analytic width formulas, and the bouncing-emitter demo.

Two formalisms are provided. The weak-collision (Gaussian-process) route
evaluates a time-domain dephasing integral whose kernel is the memory
function H(x) = exp(-x) - 1 + x. The strong-collision route assumes a
single-rate velocity-thermalizing kernel and reduces to complex-error
function (Faddeeva) algebra, including the full two-field susceptibility
with an arbitrary coupling Rabi frequency.

Conventions: chi carries units of 1/m so that i*chi is the spatial gain
rate of the envelope; Im chi >= 0 means absorption; all rates are rad/s.
The optical width Gamma entering the weak-collision dephasing integral is
the bare dipole width, it does not include the collision rate gamma_c
(collisional pressure broadening is a separate physical knob); gamma_c
appears added to Gamma only inside the strong-collision velocity
denominators, where the thermalizing kernel puts it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_hermite, wofz

from .params import BeamGeometry, DriveParams, MediumParams, ParameterError

SQRT2 = math.sqrt(2.0)
TWO_PI = 2.0 * math.pi
#: FWHM of a unit-sigma Gaussian
GAUSSIAN_FWHM = 2.0 * math.sqrt(2.0 * math.log(2.0))


class QuadratureError(RuntimeError):
    """Raised when an adaptive integral fails to converge."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls for the time-domain dephasing integrals.

    tail_eps sets the truncation point (|envelope| < tail_eps), rtol the
    relative convergence target for panel doubling, panel_order the nodes
    per Gauss-Legendre panel.
    """

    tail_eps: float = 1e-12
    rtol: float = 1e-9
    panel_order: int = 24
    max_doublings: int = 14


@dataclass
class ComplexSpectrum:
    """Sampled complex susceptibility versus detuning.

    detunings must be strictly increasing; chi has matching length.
    meta records the formalism tag and a parameter snapshot.
    """

    detunings: np.ndarray
    chi: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.detunings = np.asarray(self.detunings, dtype=float)
        self.chi = np.asarray(self.chi, dtype=complex)
        if self.detunings.shape != self.chi.shape:
            raise ParameterError("detunings and chi must have equal length")
        if self.detunings.size > 1 and not np.all(np.diff(self.detunings) > 0):
            raise ParameterError("detunings must be strictly increasing")


@dataclass(frozen=True)
class WidthReport:
    """Motional width summary [rad/s], see motional_widths."""

    doppler: float
    dicke: float
    interpolated: float
    residual_doppler: float
    residual_dicke: float


def memory_kernel_H(x):
    """Dephasing memory kernel H(x) = exp(-x) - 1 + x.

    Below x = 1e-4 the closed form loses relative accuracy to cancellation,
    so the series x^2/2 - x^3/6 + x^4/24 is used there. H is nonnegative
    and monotone increasing; H(x)/x -> 1 for large x.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ParameterError("memory_kernel_H requires x >= 0")
    small = x < 1e-4
    out = np.where(
        small,
        x * x * (0.5 + x * (-1.0 / 6.0 + x * (1.0 / 24.0))),
        np.expm1(-x) + x,
    )
    if out.ndim == 0:
        return float(out)
    return out


# series coefficients above are used only below x=1e-4 where the x^5 term
# is < 1e-21 relative, far inside double precision


def motional_widths(medium: MediumParams, geom: BeamGeometry) -> WidthReport:
    """Doppler, Dicke and interpolated motional widths for the geometry.

    doppler = v_T*|q| is the 1-sigma Doppler width; dicke = D q^2 is the
    motionally narrowed Lorentzian HWHM. interpolated is the bridging
    formula (v_T/Lambda)(4/a^2) H(2 pi a Lambda/lambda) with a^2 = 2/ln 2;
    its limits identify it as a FWHM: it tends to 2 sqrt(2 ln 2) v_T q
    (Gaussian FWHM) for Lambda q >> 1 and to 2 D q^2 (Lorentzian FWHM) for
    Lambda q << 1. The residual widths repeat doppler/dicke with the
    two-photon wavenumber k in place of q.
    """
    q = geom.q
    k = geom.k
    doppler = medium.v_T * q
    if medium.gamma_c > 0:
        Lambda = medium.v_T / medium.gamma_c
        D = medium.v_T * Lambda
        dicke = D * q * q
        residual_dicke = D * k * k
        a_sq = 2.0 / math.log(2.0)
        a = math.sqrt(a_sq)
        # 2 pi Lambda / lambda = q Lambda
        x = a * q * Lambda
        interpolated = (medium.v_T / Lambda) * (4.0 / a_sq) * memory_kernel_H(x)
    else:
        dicke = math.inf
        residual_dicke = math.inf
        interpolated = GAUSSIAN_FWHM * doppler
    return WidthReport(
        doppler=doppler,
        dicke=dicke,
        interpolated=interpolated,
        residual_doppler=medium.v_T * k,
        residual_dicke=residual_dicke,
    )


# ---------------------------------------------------------------------------
# weak-collision (Gaussian-process) time-domain integrals


def _dephasing_exponent(tau, wavenumber, medium: MediumParams):
    """phi(tau) such that the dephasing factor is exp(-phi).

    For gamma_c > 0 this is (w*Lambda)^2 H(gamma_c tau); the ballistic
    limit gamma_c = 0 is the Gaussian free-induction decay (w v_T tau)^2/2.
    """
    if medium.gamma_c > 0:
        Lam = medium.v_T / medium.gamma_c
        return (wavenumber * Lam) ** 2 * memory_kernel_H(medium.gamma_c * tau)
    return 0.5 * (wavenumber * medium.v_T * tau) ** 2


def _weak_integral(
    deltas: np.ndarray,
    rate: float,
    wavenumber: float,
    medium: MediumParams,
    quad: QuadratureSpec,
) -> np.ndarray:
    """I(Delta) = integral_0^inf exp(-(i Delta + rate) tau - phi(tau)) dtau.

    Truncated where the real envelope falls below quad.tail_eps, then
    integrated with composite Gauss-Legendre panels, doubling the panel
    count until the result moves by less than quad.rtol.
    """
    decays = rate > 0 or (wavenumber > 0 and medium.v_T > 0)
    if not decays:
        raise ParameterError("integrand does not decay: need rate > 0 or dephasing")

    target = -math.log(quad.tail_eps)

    def exponent(tau):
        return rate * tau + _dephasing_exponent(tau, wavenumber, medium)

    # bracket tau_max by doubling from the fastest physical timescale,
    # then bisect on the (monotone) exponent
    scales = []
    if rate > 0:
        scales.append(1.0 / rate)
    if wavenumber > 0 and medium.v_T > 0:
        scales.append(1.0 / (wavenumber * medium.v_T))
        if medium.gamma_c > 0:
            scales.append(1.0 / medium.gamma_c)
    hi = min(scales)
    while exponent(hi) < target:
        hi *= 2.0
    lo = 0.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if exponent(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * hi:
            break
    tau_max = hi

    deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
    # a panel_order-point rule resolves a phase sweep of a few radians per
    # node; start with panels sized so each sees < ~12 radians
    span = (np.max(np.abs(deltas)) + rate) * tau_max
    n_panels = max(2, int(math.ceil(span / 12.0)))

    nodes, weights = leggauss(quad.panel_order)

    def evaluate(n: int) -> np.ndarray:
        edges = np.linspace(0.0, tau_max, n + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        tau = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        wts = (half[:, None] * weights[None, :]).ravel()
        env = wts * np.exp(-rate * tau - _dephasing_exponent(tau, wavenumber, medium))
        # I(Delta) = sum_j env_j exp(-i Delta tau_j), chunked over Delta
        out = np.empty(deltas.shape, dtype=complex)
        chunk = max(1, int(4e6 / max(tau.size, 1)))
        for i in range(0, deltas.size, chunk):
            d = deltas[i : i + chunk]
            out[i : i + chunk] = np.exp(-1j * np.outer(d, tau)) @ env
        return out

    prev = evaluate(n_panels)
    for _ in range(quad.max_doublings):
        n_panels *= 2
        cur = evaluate(n_panels)
        err = np.max(np.abs(cur - prev)) / max(np.max(np.abs(cur)), 1e-300)
        prev = cur
        if err < quad.rtol:
            return prev
    raise QuadratureError(
        f"time-domain integral did not converge (panels={n_panels}, "
        f"tau_max={tau_max:.3e}, rtol={quad.rtol})"
    )


def chi_one_photon_weak(
    Delta_p,
    medium: MediumParams,
    geom: BeamGeometry,
    quad: QuadratureSpec = QuadratureSpec(),
):
    """One-photon susceptibility, weak-collision (Gaussian-process) model.

    chi(Delta_p) = i g * integral_0^inf exp[(-i Delta_p - Gamma) tau]
    * exp[-(q Lambda)^2 H(gamma_c tau)] dtau. Gaussian of FWHM
    2 sqrt(2 ln 2) v_T q in the Doppler limit (q Lambda >> 1), Lorentzian
    of HWHM Gamma + D q^2 in the motionally narrowed limit.
    """
    scalar = np.isscalar(Delta_p)
    out = 1j * medium.g * _weak_integral(Delta_p, medium.Gamma, geom.q, medium, quad)
    return complex(out[0]) if scalar else out


def chi_raman_weak(
    Delta,
    medium: MediumParams,
    geom: BeamGeometry,
    quad: QuadratureSpec = QuadratureSpec(),
):
    """Raman (two-photon) susceptibility, weak-collision model.

    Shares the one-photon integrand with the substitutions q -> k,
    Gamma -> gamma0, Delta_p -> -Delta, divided by Gamma^2:
    chi(Delta) = (i g / Gamma^2) * integral exp[(i Delta - gamma0) tau]
    * exp[-(k Lambda)^2 H(gamma_c tau)] dtau. The transmission resonance
    has HWHM gamma0 + D k^2 in the narrowed limit.
    """
    if medium.Gamma <= 0:
        raise ParameterError("chi_raman_weak needs Gamma > 0 for the prefactor")
    scalar = np.isscalar(Delta)
    deltas = -np.atleast_1d(np.asarray(Delta, dtype=float))
    out = (
        1j
        * medium.g
        / medium.Gamma**2
        * _weak_integral(deltas, medium.gamma0, geom.k, medium, quad)
    )
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# strong-collision (single-rate kernel) closed forms


def _faddeeva_cauchy(z):
    """integral F(u)/(z - u) du for a unit Gaussian F with sigma = 1.

    Equals -i sqrt(pi/2) w(z/sqrt(2)) continued to Im z < 0 through the
    reflection w(-z) = 2 exp(-z^2) - w(z) built into the formula below.
    """
    z = np.asarray(z, dtype=complex)
    zs = z / SQRT2
    upper = np.imag(zs) >= 0
    out = np.empty(z.shape, dtype=complex)
    out[upper] = -1j * math.sqrt(math.pi / 2.0) * wofz(zs[upper])
    zl = zs[~upper]
    # conjugate-reflect into the upper half plane where wofz is accurate
    out[~upper] = np.conj(-1j * math.sqrt(math.pi / 2.0) * wofz(np.conj(zl)))
    return out


def voigt_G(Delta_p, medium: MediumParams, geom: BeamGeometry):
    """Velocity-averaged optical Green function G(Delta_p) [s].

    G = (1/sqrt(2 pi) v_T) integral du exp(-u^2/2 v_T^2)
    / (Delta_p - q u + i (Gamma + gamma_c)); evaluated through the
    Faddeeva function w(z) with relative error below 1e-6. Im G < 0
    everywhere (passive response).
    """
    W = medium.Gamma + medium.gamma_c
    if not W > 0:
        raise ParameterError("voigt_G requires Gamma + gamma_c > 0")
    scalar = np.isscalar(Delta_p)
    z = (np.atleast_1d(np.asarray(Delta_p, dtype=float)) + 1j * W) / (
        medium.v_T * geom.q
    )
    out = _faddeeva_cauchy(z) / (medium.v_T * geom.q)
    return complex(out[0]) if scalar else out


def chi_one_photon_strong(Delta_p, medium: MediumParams, geom: BeamGeometry):
    """One-photon susceptibility for the single-rate collision kernel.

    chi = g G/(i gamma_c G - 1); reduces to -g G at gamma_c = 0 and to the
    motionally narrowed Lorentzian of HWHM Gamma + D q^2 for
    q Lambda << 1.
    """
    G = voigt_G(Delta_p, medium, geom)
    return medium.g * G / (1j * medium.gamma_c * G - 1.0)


def _gauss_hermite_velocity(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Probabilist-scaled Gauss-Hermite nodes for a unit-sigma Gaussian."""
    x, w = roots_hermite(n)
    return x * SQRT2, w / math.sqrt(math.pi)


def _collinear_GX(a1, a2, qv, kv, Omega):
    """The three G_X integrals for collinear beams, via partial fractions.

    a1 = Delta_p + i(Gamma+gamma_c), a2 = Delta + i(gamma0+gamma_c); qv and
    kv are q*v_T and k*v_T (velocity-scaled wavenumbers). Returns
    (G_dp, G_d, G_Om) where the denominators are dp(v) d(v) - Omega^2 with
    dp = a1 - qv u, d = a2 - kv u for a unit-sigma u.
    """
    if kv == 0.0:
        # single pole in u: dp d - Om^2 = a2 (a1_eff - qv u)
        a1_eff = a1 - Omega**2 / a2
        V = _faddeeva_cauchy(a1_eff / qv) / qv
        G_d = V
        G_dp = (1.0 + (Omega**2 / a2) * V) / a2
        G_Om = Omega * V / a2
        return G_dp, G_d, G_Om

    # quadratic denominator qv kv (u - u1)(u - u2)
    A = qv * kv
    B = -(a1 * kv + a2 * qv)
    C = a1 * a2 - Omega**2
    disc = np.sqrt(B * B - 4.0 * A * C + 0j)
    u1 = (-B + disc) / (2.0 * A)
    u2 = (-B - disc) / (2.0 * A)
    scale = (abs(a1) + abs(a2)) / (abs(qv) + abs(kv)) + abs(u1) + abs(u2)
    if abs(u1 - u2) < 1e-10 * scale:
        # (near-)degenerate double pole: split it symmetrically by a small
        # complex offset; the partial-fraction sum stays well conditioned
        # and the O(eps^2) error is far below the quadrature tolerance
        u0 = 0.5 * (u1 + u2)
        eps = 1e-7 * (1.0 + abs(u0))
        u1 = u0 + eps
        u2 = u0 - eps
    C1 = _faddeeva_cauchy(u1)  # integral F/(u1 - u) du
    C2 = _faddeeva_cauchy(u2)
    denom = A * (u1 - u2)

    def integral(p0, p1):
        """integral F (p0 + p1 u) / (A (u-u1)(u-u2)) du."""
        r1 = (p0 + p1 * u1) / denom
        r2 = -(p0 + p1 * u2) / denom
        # 1/(u - ui) = -1/(ui - u)
        return -(r1 * C1 + r2 * C2)

    G_dp = integral(a1, -qv)
    G_d = integral(a2, -kv)
    G_Om = integral(Omega, 0.0)
    return G_dp, G_d, G_Om


def _angled_GX(a1, a2, qv, kv, Omega, nodes: int):
    """G_X for the small-angle geometry: residual k perpendicular to q.

    Velocity axis u along q is integrated exactly (Faddeeva); the
    perpendicular axis w enters only through d(w) = a2 - kv w and is summed
    by Gauss-Hermite quadrature.
    """
    x, wts = _gauss_hermite_velocity(nodes)
    d = a2 - kv * x
    a1_eff = a1 - Omega**2 / d
    V = _faddeeva_cauchy(a1_eff / qv) / qv
    G_d = np.sum(wts * V)
    G_dp = np.sum(wts * (1.0 + (Omega**2 / d) * V) / d)
    G_Om = Omega * np.sum(wts * V / d)
    return G_dp, G_d, G_Om


def chi_full_strong(
    Delta_p,
    Delta,
    medium: MediumParams,
    geom: BeamGeometry,
    drive: DriveParams,
    geometry: str = "collinear",
    nodes: int = 201,
):
    """Full two-field susceptibility for the single-rate collision kernel.

    Built from the three velocity integrals G_X (X one of the two complex
    detunings or the coupling Rabi frequency) over the Maxwell-Boltzmann
    distribution with denominator dp(v) d(v) - Omega_c^2:

        chi = (i g / gamma_c) [ (1 - i gamma_c G_dp) / G - 1 ],
        G = (1 - i gamma_c G_dp)(1 - i gamma_c G_d) + gamma_c^2 G_Om^2.

    geometry="collinear" puts the residual wavenumber k along q (exact
    Faddeeva algebra); geometry="angled" puts k perpendicular to q (the
    degenerate small-angle scheme) and integrates the second velocity axis
    with `nodes` Gauss-Hermite points. At Omega_c = 0 this reduces exactly
    to chi_one_photon_strong; at gamma_c = 0 it reduces to the
    velocity-averaged two-level-dressed response -g G_d.
    """
    if geometry not in ("collinear", "angled"):
        raise ParameterError(f"unknown geometry {geometry!r}")
    scalar = np.isscalar(Delta_p) and np.isscalar(Delta)
    Delta_p = np.atleast_1d(np.asarray(Delta_p, dtype=float))
    Delta = np.atleast_1d(np.asarray(Delta, dtype=float))
    Delta_p, Delta = np.broadcast_arrays(Delta_p, Delta)

    W1 = medium.Gamma + medium.gamma_c
    W2 = medium.gamma0 + medium.gamma_c
    if not W1 > 0:
        raise ParameterError("need Gamma + gamma_c > 0")
    qv = geom.q * medium.v_T
    kv = geom.k * medium.v_T
    Om = drive.Omega_c

    out = np.empty(Delta_p.shape, dtype=complex)
    it = np.nditer([Delta_p, Delta], flags=["multi_index"])
    for dp, d in it:
        a1 = complex(dp) + 1j * W1
        a2 = complex(d) + 1j * W2
        if geometry == "collinear":
            G_dp, G_d, G_Om = _collinear_GX(a1, a2, qv, kv, Om)
        else:
            G_dp, G_d, G_Om = _angled_GX(a1, a2, qv, kv, Om, nodes)
        if medium.gamma_c == 0.0:
            chi = -medium.g * G_d
        else:
            gc = medium.gamma_c
            P = 1.0 - 1j * gc * G_dp
            G = P * (1.0 - 1j * gc * G_d) + gc**2 * G_Om**2
            chi = (1j * medium.g / gc) * (P / G - 1.0)
        out[it.multi_index] = chi
    if scalar:
        return complex(out.reshape(-1)[0])
    return out


def chi_dicke(
    Delta,
    k: float,
    medium: MediumParams,
    drive: DriveParams,
    mode: str = "stationary",
    geom: BeamGeometry | None = None,
):
    """Motionally narrowed (diffusive) dark-resonance susceptibility.

    chi = (i g / Gamma')(1 - gammaP/(gamma + D k^2 - i Delta)) with
    gammaP = Omega_c^2/Gamma', gamma = gamma0 + gammaP: a complex
    Lorentzian dip of HWHM gamma + D k^2 at Delta = 0. Validity needs
    k Lambda << 1; a warning (not an error) is issued otherwise.
    """
    from .params import gamma_prime as _gamma_prime

    if medium.gamma_c <= 0:
        raise ParameterError("chi_dicke needs gamma_c > 0 (diffusive medium)")
    Lam = medium.v_T / medium.gamma_c
    if k * Lam > 0.3:
        warnings.warn(
            f"k*Lambda = {k * Lam:.3g} is outside the narrowed regime", stacklevel=2
        )
    D = medium.v_T * Lam
    gp = _gamma_prime(medium, geom, drive.Delta_p, mode=mode)
    gammaP = drive.Omega_c**2 / gp
    gamma = medium.gamma0 + gammaP
    Delta = np.asarray(Delta, dtype=float)
    chi = (1j * medium.g / gp) * (1.0 - gammaP / (gamma + D * k * k - 1j * Delta))
    if chi.ndim == 0:
        return complex(chi)
    return chi


def group_velocity(
    k: float,
    medium: MediumParams,
    drive: DriveParams,
    mode: str = "stationary",
    geom: BeamGeometry | None = None,
) -> float:
    """Polariton group velocity (gamma + D k^2)^2/(alpha gammaP) [m/s].

    Increases with k (transverse or residual wavenumber); at k = 0 it is
    the familiar gamma^2/(alpha gammaP). Returns +inf when gammaP = 0
    (no coupling field, nothing propagates slowly).
    """
    from .params import derive_params

    der = derive_params(medium, drive, geom, mode=mode)
    if der.gammaP <= 0 or der.alpha <= 0:
        return math.inf
    width = der.gamma + der.D * k * k
    return width**2 / (der.alpha * der.gammaP)


# ---------------------------------------------------------------------------
# bouncing / colliding emitter demo


def dicke_emitter_spectrum(
    v: float,
    q: float,
    collision_rate: float = 0.0,
    wall_spacing: float | None = None,
    duration: float = 1e-6,
    dt: float = 1e-10,
    seed: int = 0,
) -> ComplexSpectrum:
    """Power spectral density of exp(i q x(t)) for a 1D moving emitter.

    The emitter moves at speed v, reversing direction elastically at walls
    separated by wall_spacing (deterministic) and/or at Poisson-distributed
    collision times with the given rate (stochastic, seeded). The
    collisionless bouncing emitter shows sidebands at +-qv; frequent
    collisions (rate >> qv) collapse the power into the carrier.

    Returns a ComplexSpectrum whose detunings are the (shifted) FFT
    angular frequencies and whose chi holds the PSD normalized to unit
    total power.
    """
    if v < 0 or q <= 0 or dt <= 0 or duration <= 0:
        raise ParameterError("need v >= 0, q > 0, dt > 0, duration > 0")
    if v > 0:
        if dt * q * v >= 0.5:
            raise ParameterError(
                f"undersampled: dt*q*v = {dt * q * v:.3g} must be < 0.5"
            )
        if duration * q * v < 10.0:
            raise ParameterError("duration too short to resolve the sidebands")

    n = int(round(duration / dt))
    t = np.arange(n) * dt

    if v == 0.0:
        x = np.zeros(n)
    else:
        rng = np.random.default_rng(seed)
        # build the piecewise-linear trajectory event by event, then sample
        times = [0.0]
        positions = [0.0]
        direction = 1.0
        t_now, x_now = 0.0, 0.0
        half = math.inf if wall_spacing is None else 0.5 * wall_spacing
        while t_now < duration:
            if collision_rate > 0:
                t_coll = rng.exponential(1.0 / collision_rate)
            else:
                t_coll = math.inf
            if math.isfinite(half):
                wall = half if direction > 0 else -half
                t_wall = (wall - x_now) / (direction * v)
            else:
                t_wall = math.inf
            t_step = min(t_coll, t_wall, duration - t_now)
            if not math.isfinite(t_step):
                raise ParameterError("free emitter needs walls or collisions")
            t_now += t_step
            x_now += direction * v * t_step
            times.append(t_now)
            positions.append(x_now)
            direction = -direction
        x = np.interp(t, times, positions)

    signal = np.exp(1j * q * x)
    spec = np.fft.fftshift(np.fft.fft(signal))
    psd = np.abs(spec) ** 2
    psd /= psd.sum()
    omega = np.fft.fftshift(np.fft.fftfreq(n, d=dt)) * TWO_PI
    return ComplexSpectrum(
        detunings=omega,
        chi=psd.astype(complex),
        meta={
            "formalism": "emitter-demo",
            "v": v,
            "q": q,
            "collision_rate": collision_rate,
            "wall_spacing": wall_spacing if wall_spacing is not None else float("nan"),
            "seed": seed,
        },
    )


# ---------------------------------------------------------------------------
# profile measurement helpers (width extraction, Kramers-Kronig check)


def fwhm(x: np.ndarray, y: np.ndarray, baseline: float = 0.0) -> float:
    """Full width at half maximum of a single-peaked sampled profile.

    The profile is interpolated with a monotone cubic (PCHIP) on each
    flank and the two half-level crossings are bracketed from the samples
    and refined by bisection on the interpolant. `baseline` is subtracted
    before measuring.
    """
    from scipy.interpolate import PchipInterpolator
    from scipy.optimize import brentq

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float) - baseline
    i0 = int(np.argmax(y))
    if i0 == 0 or i0 == y.size - 1:
        raise ParameterError("peak lies on the grid edge; widen the scan")
    half = 0.5 * y[i0]

    interp = PchipInterpolator(x, y)

    def crossing(side: int) -> float:
        idx = np.arange(i0, -1, -1) if side < 0 else np.arange(i0, y.size)
        below = np.nonzero(y[idx] < half)[0]
        if below.size == 0:
            raise ParameterError("profile does not fall to half level in window")
        j = idx[below[0]]
        a, b = (x[j], x[j - side]) if side < 0 else (x[j - side], x[j])
        lo, hi = min(a, b), max(a, b)
        return brentq(lambda xx: interp(xx) - half, lo, hi, xtol=1e-14 * (hi - lo + 1))

    return crossing(+1) - crossing(-1)


def lorentzian_fit(x: np.ndarray, y: np.ndarray) -> dict:
    """Least-squares fit of y to A hw^2/((x-x0)^2+hw^2) + c.

    Returns the fitted {amplitude, center, hwhm, offset}. Used where a
    width is defined by a fit rather than by direct interpolation.
    """
    from scipy.optimize import curve_fit

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    def model(xx, A, x0, hw, c):
        return A * hw**2 / ((xx - x0) ** 2 + hw**2) + c

    A0 = float(np.max(y) - np.min(y))
    x00 = float(x[np.argmax(y)])
    hw0 = 0.25 * (x[-1] - x[0])
    popt, _ = curve_fit(model, x, y, p0=[A0, x00, hw0, float(np.min(y))], maxfev=20000)
    return {
        "amplitude": popt[0],
        "center": popt[1],
        "hwhm": abs(popt[2]),
        "offset": popt[3],
    }


def kramers_kronig_real(detunings: np.ndarray, im_chi: np.ndarray) -> np.ndarray:
    """Re chi reconstructed from Im chi by a principal-value Hilbert sum.

    Re chi(d) = (1/pi) P integral Im chi(d')/(d - d') dd' for a response
    analytic in the upper half plane with our i*chi gain convention.
    Uniform-grid trapezoid with the singular node dropped; the symmetric
    kernel cancels the leading local error. Accuracy is limited by the
    window truncation, adequate for a few-percent consistency check near
    line center.
    """
    d = np.asarray(detunings, dtype=float)
    im = np.asarray(im_chi, dtype=float)
    h = d[1] - d[0]
    if not np.allclose(np.diff(d), h, rtol=1e-9):
        raise ParameterError("kramers_kronig_real needs a uniform grid")
    diff = d[:, None] - d[None, :]
    np.fill_diagonal(diff, np.inf)
    return (h / math.pi) * (im[None, :] / diff).sum(axis=1)
