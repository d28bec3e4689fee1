"""Physical parameter containers and derived quantities.

Every rate and detuning inside the library is an angular frequency in rad/s.
The command line layer converts from ordinary frequencies (Hz) at the
boundary; see `load_params_file` for exactly which keys are 2*pi scaled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

TWO_PI = 2.0 * math.pi


class ParameterError(ValueError):
    """Raised when a physical parameter set fails validation."""


@dataclass(frozen=True)
class MediumParams:
    """Atomic medium and buffer-gas rates.

    Parameters
    ----------
    gamma0 : float
        Ground-state decoherence rate [rad/s].
    Gamma : float
        Optical dipole decay rate (excited-state coherence width) [rad/s].
        This is the bare radiative/pressure width; the collision rate
        ``gamma_c`` is *not* folded in here, it enters the formulas on its
        own where required.
    gamma_c : float
        Velocity-correlation (collision) rate [1/s]. Zero means ballistic
        motion (no buffer gas).
    v_T : float
        Thermal velocity (1-sigma of one velocity component) [m/s].
    g : float
        Light-matter coupling constant [1/(m s)]; chi = g / rate has units
        of 1/m so that i*chi is the spatial gain rate of the envelope.
    """

    gamma0: float
    Gamma: float
    gamma_c: float
    v_T: float
    g: float = 1.0

    def __post_init__(self) -> None:
        for name in ("gamma0", "Gamma", "gamma_c", "g"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not self.v_T > 0:
            raise ParameterError(f"v_T must be > 0, got {self.v_T}")


@dataclass(frozen=True)
class BeamGeometry:
    """Optical wavenumbers and the residual Raman wavenumber.

    ``k`` defaults to the law-of-cosines combination of the two optical
    wavenumbers, |q - q_c|; for the degenerate scheme (q == q_c) this is
    2 q sin(theta/2) which equals theta*q to small-angle accuracy.
    """

    q: float
    q_c: float | None = None
    theta: float = 0.0
    k: float | None = None

    def __post_init__(self) -> None:
        if self.q_c is None:
            object.__setattr__(self, "q_c", self.q)
        if not (self.q > 0 and self.q_c > 0):
            raise ParameterError("optical wavenumbers must be > 0")
        if self.k is None:
            k = math.sqrt(
                self.q**2 + self.q_c**2 - 2.0 * self.q * self.q_c * math.cos(self.theta)
            )
            object.__setattr__(self, "k", k)
        if self.k < 0:
            raise ParameterError("residual wavenumber k must be >= 0")

    @property
    def raman_wavelength(self) -> float:
        """Spatial period 2*pi/k of the two-beam interference pattern [m]."""
        if self.k == 0:
            return math.inf
        return TWO_PI / self.k


@dataclass(frozen=True)
class DriveParams:
    """Coupling-field strength and the two detunings.

    Delta is the two-photon (Raman) detuning, Delta_p the one-photon probe
    detuning; all in rad/s.
    """

    Omega_c: float
    Delta: float = 0.0
    Delta_p: float = 0.0

    def __post_init__(self) -> None:
        if self.Omega_c < 0:
            raise ParameterError("Omega_c must be >= 0")


@dataclass(frozen=True)
class DerivedParams:
    """Quantities derived from the primary containers.

    ``gamma_prime`` keeps the complex dressed optical width; the real-valued
    fields (gammaP, gamma, alpha, k0) are its resonance evaluations and are
    exactly real when Delta_p = 0 in both width modes. ``diffusive`` is False
    for gamma_c = 0, in which case Lambda and D are +inf (ballistic medium)
    and k0 is 0.
    """

    Lambda: float
    D: float
    gammaP: float
    gamma: float
    alpha: float
    k0: float
    gamma_prime: complex
    diffusive: bool


def gamma_prime(
    medium: MediumParams,
    geom: BeamGeometry | None = None,
    Delta_p: float = 0.0,
    mode: str = "stationary",
) -> complex:
    """Dressed optical width Gamma' seen by the Raman coherence.

    mode="stationary" returns Gamma + i*Delta_p (atom at rest).
    mode="doppler" returns i*g/chi_I evaluated with the strong-collision
    one-photon susceptibility, which folds Doppler broadening and collisional
    narrowing of the optical line into the effective width; it requires a
    BeamGeometry for q.
    """
    if mode == "stationary":
        return complex(medium.Gamma, Delta_p)
    if mode == "doppler":
        if geom is None:
            raise ParameterError("doppler mode needs a BeamGeometry for q")
        from .lineshape import chi_one_photon_strong

        chi = chi_one_photon_strong(Delta_p, medium, geom)
        return 1j * medium.g / chi
    raise ParameterError(f"unknown gamma_prime mode {mode!r}")


def derive_params(
    medium: MediumParams,
    drive: DriveParams,
    geom: BeamGeometry | None = None,
    mode: str = "stationary",
) -> DerivedParams:
    """Compute mean free path, diffusion coefficient and the dressed rates.

    Lambda = v_T/gamma_c, D = v_T^2/gamma_c, gammaP = Omega_c^2/Gamma',
    gamma = gamma0 + gammaP, alpha = g/Gamma', k0 = sqrt(gamma/D).
    Gamma' is evaluated at drive.Delta_p in the requested mode; off
    resonance the power broadening becomes complex and the real parts are
    stored (the full complex Gamma' is kept alongside).
    """
    gp = gamma_prime(medium, geom, drive.Delta_p, mode=mode)
    gammaP = (drive.Omega_c**2 / gp).real if drive.Omega_c > 0 else 0.0
    gamma = medium.gamma0 + gammaP
    alpha = (medium.g / gp).real

    if medium.gamma_c > 0:
        Lambda = medium.v_T / medium.gamma_c
        D = medium.v_T * Lambda
        k0 = math.sqrt(gamma / D)
        diffusive = True
    else:
        Lambda = math.inf
        D = math.inf
        k0 = 0.0
        diffusive = False

    return DerivedParams(
        Lambda=Lambda,
        D=D,
        gammaP=gammaP,
        gamma=gamma,
        alpha=alpha,
        k0=k0,
        gamma_prime=gp,
        diffusive=diffusive,
    )


# ---------------------------------------------------------------------------
# key=value parameter files

#: keys multiplied by 2*pi on load (quoted as ordinary frequencies, Hz)
FREQUENCY_KEYS = ("gamma0", "Gamma", "Omega_c", "Delta", "Delta_p")
#: keys taken literally (kinetic rates, lengths, velocities, couplings)
LITERAL_KEYS = (
    "gamma_c",
    "v_T",
    "g",
    "q",
    "q_c",
    "theta",
    "k",
    "wavelength",
    "wavelength_c",
    "D",
)


def load_params_file(path: str | Path) -> dict[str, float]:
    """Parse a `name = value` parameter file into rad/s internal units.

    Lines starting with `#` (and inline `# ...` tails) are comments.
    Frequency-type keys (gamma0, Gamma, Omega_c, Delta, Delta_p) are given
    in Hz and multiplied by 2*pi; kinetic keys (gamma_c in 1/s, v_T in m/s,
    D in m^2/s, wavelengths in m, angles in rad) are taken literally.
    """
    raw: dict[str, float] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected `name = value`")
        name, _, value = line.partition("=")
        name = name.strip()
        try:
            raw[name] = float(value.strip())
        except ValueError as exc:
            raise ParameterError(f"{path}:{lineno}: bad value for {name}: {exc}")
    return scale_raw_params(raw)


def scale_raw_params(raw: Mapping[str, float]) -> dict[str, float]:
    """Apply the Hz -> rad/s convention to a raw key/value mapping."""
    out: dict[str, float] = {}
    for name, value in raw.items():
        if name in FREQUENCY_KEYS:
            out[name] = TWO_PI * value
        elif name in LITERAL_KEYS:
            out[name] = value
        else:
            raise ParameterError(f"unknown parameter key {name!r}")
    return out


def build_params(
    values: Mapping[str, float],
) -> tuple[MediumParams, BeamGeometry, DriveParams]:
    """Assemble the three parameter containers from a flat mapping.

    Accepts the alternative spellings: `wavelength` (m) instead of `q`,
    `wavelength_c` instead of `q_c`, and `D` (m^2/s) instead of `gamma_c`
    (resolved through gamma_c = v_T^2/D). Missing drive keys default to 0.
    """
    vals = dict(values)
    if "q" not in vals:
        if "wavelength" in vals:
            vals["q"] = TWO_PI / vals.pop("wavelength")
        else:
            raise ParameterError("need q or wavelength")
    if "q_c" not in vals and "wavelength_c" in vals:
        vals["q_c"] = TWO_PI / vals.pop("wavelength_c")
    if "gamma_c" not in vals and "D" in vals:
        if "v_T" not in vals:
            raise ParameterError("resolving gamma_c from D needs v_T")
        vals["gamma_c"] = vals["v_T"] ** 2 / vals.pop("D")
    else:
        vals.pop("D", None)

    medium = MediumParams(
        gamma0=vals.get("gamma0", 0.0),
        Gamma=vals.get("Gamma", 0.0),
        gamma_c=vals.get("gamma_c", 0.0),
        v_T=vals.get("v_T", 1.0),
        g=vals.get("g", 1.0),
    )
    geom = BeamGeometry(
        q=vals["q"],
        q_c=vals.get("q_c"),
        theta=vals.get("theta", 0.0),
        k=vals.get("k"),
    )
    drive = DriveParams(
        Omega_c=vals.get("Omega_c", 0.0),
        Delta=vals.get("Delta", 0.0),
        Delta_p=vals.get("Delta_p", 0.0),
    )
    return medium, geom, drive
