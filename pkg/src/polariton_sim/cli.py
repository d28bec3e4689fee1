"""Command-line front-end: parameter files in, CSV/CF2D artifacts out.

Exit codes follow a fixed contract: 0 success, 2 usage (argument
grammar), 3 parameter validation, 4 numerical non-convergence. Each
failure prints one `error: <category>: <message>` line on stderr.
Detunings on the command line are plain numbers in Hz or multiples of
the dressed width written as `1.5gamma`; velocities accept `qD`
multiples the same way. All artifacts embed the resolved parameter set
and are written atomically.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .csvio import (
    DURATIONS_KIND,
    PSD_KIND,
    SPECTRUM_KIND,
    STORAGE_METRICS_KIND,
    format_float,
    spectrum_columns,
    write_table,
)
from .fields import ScalarField2D, beam_metrics, read_cf2d, square_grid, write_cf2d
from .kinetics import VelocityGrid, oracle_spectrum
from .lineshape import (
    QuadratureError,
    chi_dicke,
    chi_full_strong,
    chi_one_photon_strong,
    chi_one_photon_weak,
    chi_raman_weak,
    dicke_emitter_spectrum,
)
from .params import (
    ParameterError,
    build_params,
    derive_params,
    load_params_file,
    scale_raw_params,
)
from .propagator import CHI_MODES, PropagationPlan, propagate
from .ramsey import (
    WALL_MODELS,
    RamseyGeometry,
    chi_ramsey_narrowed,
    ramsey_correction,
    simulate_repeated_interaction,
)
from .storage import ModeSpec, StorageRun, evolve_stored, make_mode

TWO_PI = 2.0 * math.pi

FORMAT_BANNER = (
    "spectrum-csv v1, durations-csv v1, psd-csv v1, "
    "storage-metrics-csv v1, cf2d v1"
)


class UsageError(Exception):
    """Argument combinations the grammar cannot express statically."""


def _fail(category: str, message: str) -> str:
    text = " ".join(str(message).split())
    return f"error: {category}: {text}"


# ---------------------------------------------------------------------------
# symbolic values and shared argument plumbing


def _suffix_factor(head: str) -> float:
    if head in ("", "+"):
        return 1.0
    if head == "-":
        return -1.0
    return float(head)


def parse_rate(text: str, derived) -> float:
    """A detuning/rate argument: Hz plain, or a `gamma` multiple [rad/s]."""
    t = text.strip()
    if t.endswith("gamma"):
        try:
            factor = _suffix_factor(t[: -len("gamma")])
        except ValueError:
            raise UsageError(f"bad gamma multiple {text!r}")
        if derived is None:
            raise ParameterError(
                f"{text!r} needs medium parameters to resolve gamma"
            )
        return factor * derived.gamma
    try:
        return TWO_PI * float(t)
    except ValueError:
        raise UsageError(f"bad frequency value {text!r}")


def parse_velocity(text: str, geom, derived) -> float:
    """A velocity argument: m/s plain, or a `qD` multiple."""
    t = text.strip()
    if t.endswith("qD"):
        try:
            factor = _suffix_factor(t[: -len("qD")])
        except ValueError:
            raise UsageError(f"bad qD multiple {text!r}")
        if geom is None or derived is None or not math.isfinite(derived.D):
            raise ParameterError(
                f"{text!r} needs a diffusive medium to resolve q*D"
            )
        return factor * geom.q * derived.D
    try:
        return float(t)
    except ValueError:
        raise UsageError(f"bad velocity value {text!r}")


def parse_range(text: str, derived) -> np.ndarray:
    """A `lo:hi:n` detuning scan, endpoints inclusive, in rad/s."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must be lo:hi:n, got {text!r}")
    lo = parse_rate(parts[0], derived)
    hi = parse_rate(parts[1], derived)
    try:
        n = int(parts[2])
    except ValueError:
        raise UsageError(f"bad point count in {text!r}")
    if n < 2:
        raise UsageError("a scan needs at least 2 points")
    if not hi > lo:
        raise UsageError("range needs hi > lo")
    return np.linspace(lo, hi, n)


def load_values(args) -> dict:
    """Merge the parameter file with --set overrides (same units)."""
    values: dict[str, float] = {}
    if getattr(args, "params", None):
        values.update(load_params_file(args.params))
    for item in getattr(args, "overrides", None) or []:
        name, sep, raw = item.partition("=")
        if not sep:
            raise UsageError(f"--set wants key=value, got {item!r}")
        try:
            number = float(raw)
        except ValueError:
            raise UsageError(f"--set {name}: bad value {raw!r}")
        values.update(scale_raw_params({name.strip(): number}))
    return values


def build_all(args):
    """Containers + derived rates from the merged parameter mapping."""
    values = load_values(args)
    if not values:
        raise ParameterError("this command needs --params (or --set) values")
    medium, geom, drive = build_params(values)
    derived = derive_params(medium, drive, geom)
    return medium, geom, drive, derived


def echo_params(medium, geom, drive, derived, **extra) -> dict:
    """The resolved parameter set embedded in every artifact."""
    echo: dict[str, object] = {
        "gamma0_rad_s": medium.gamma0,
        "Gamma_rad_s": medium.Gamma,
        "gamma_c_per_s": medium.gamma_c,
        "v_T_m_s": medium.v_T,
        "g": medium.g,
        "q_rad_m": geom.q,
        "q_c_rad_m": geom.q_c,
        "theta_rad": geom.theta,
        "k_rad_m": geom.k,
        "Omega_c_rad_s": drive.Omega_c,
        "Delta_rad_s": drive.Delta,
        "Delta_p_rad_s": drive.Delta_p,
    }
    if derived is not None:
        echo.update(
            Lambda_m=derived.Lambda,
            D_m2_s=derived.D,
            gammaP_rad_s=derived.gammaP,
            gamma_rad_s=derived.gamma,
            alpha=derived.alpha,
            k0_rad_m=derived.k0,
        )
    echo.update(extra)
    return echo


def _atomic_cf2d(fld: ScalarField2D, path, meta: dict) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(
        prefix=target.name + ".", suffix=".part", dir=target.parent
    )
    os.close(fd)
    try:
        write_cf2d(fld, tmp, meta=meta)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _meta_text(echo: dict) -> dict:
    """CF2D metadata values must be strings; fix the float format."""
    out = {}
    for key, value in echo.items():
        out[key] = format_float(value) if isinstance(value, float) else str(value)
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_spectrum(args) -> int:
    medium, geom, drive, derived = build_all(args)
    grid = parse_range(args.delta_range, derived)
    scan = "delta_p" if args.model in ("weak", "strong") else "delta"
    if args.model == "weak":
        chi = chi_one_photon_weak(grid, medium, geom)
    elif args.model == "strong":
        chi = chi_one_photon_strong(grid, medium, geom)
    elif args.model == "raman":
        chi = chi_raman_weak(grid, medium, geom)
    elif args.model == "full":
        chi = chi_full_strong(
            drive.Delta_p,
            grid,
            medium,
            geom,
            drive,
            geometry=args.geometry,
            nodes=args.nodes,
        )
    else:  # dicke
        chi = chi_dicke(grid, geom.k, medium, drive, geom=geom)
    echo = echo_params(
        medium,
        geom,
        drive,
        derived,
        model=args.model,
        scan=scan,
        points=grid.size,
    )
    if args.model == "full":
        echo["geometry"] = args.geometry
        echo["nodes"] = args.nodes
    if args.length is not None:
        echo["L_m"] = args.length
    write_table(
        args.out, SPECTRUM_KIND, echo, spectrum_columns(grid, chi, args.length)
    )
    return 0


def cmd_dark_resonance(args) -> int:
    medium, geom, drive, derived = build_all(args)
    grid = parse_range(args.delta_range, derived)
    chi = chi_dicke(grid, geom.k, medium, drive, geom=geom)
    hwhm = derived.gamma + derived.D * geom.k**2
    echo = echo_params(
        medium,
        geom,
        drive,
        derived,
        model="dicke",
        scan="delta",
        points=grid.size,
        analytic_hwhm_rad_s=hwhm,
    )
    if args.length is not None:
        echo["L_m"] = args.length
    write_table(
        args.out, SPECTRUM_KIND, echo, spectrum_columns(grid, chi, args.length)
    )
    return 0


def cmd_oracle(args) -> int:
    medium, geom, drive, derived = build_all(args)
    grid = parse_range(args.delta_range, derived)
    vgrid = VelocityGrid.build(medium.v_T, axes=args.axes, nodes=args.nodes)
    delta_p = (
        parse_rate(args.delta_p, derived) if args.delta_p is not None else None
    )
    chi = oracle_spectrum(grid, medium, geom, drive, vgrid, Delta_p=delta_p)
    echo = echo_params(
        medium,
        geom,
        drive,
        derived,
        model="velocity-resolved",
        scan="delta",
        points=grid.size,
        nodes=args.nodes,
        axes=args.axes,
    )
    if delta_p is not None:
        echo["Delta_p_rad_s"] = delta_p
    if args.length is not None:
        echo["L_m"] = args.length
    write_table(
        args.out, SPECTRUM_KIND, echo, spectrum_columns(grid, chi, args.length)
    )
    return 0


def cmd_propagate(args) -> int:
    medium, geom, drive, derived = build_all(args)
    fld, _ = read_cf2d(args.infile)
    delta = parse_rate(args.delta, derived)
    v_g = (
        parse_velocity(args.vg, geom, derived) if args.vg is not None else None
    )
    plan = PropagationPlan(
        medium=medium,
        geom=geom,
        drive=drive,
        Delta=delta,
        L=args.length,
        chi_mode=args.chi_mode,
        theta_c=args.theta_c,
        v_g=v_g,
        z_steps=args.z_steps,
    )
    result = propagate(fld, plan)
    echo = echo_params(
        medium,
        geom,
        drive,
        derived,
        command="propagate",
        chi_mode=args.chi_mode,
        scan_Delta_rad_s=delta,
        L_m=args.length,
        theta_c_rad=args.theta_c,
        z_steps=args.z_steps,
    )
    if v_g is not None:
        echo["v_g_m_s"] = v_g
    _atomic_cf2d(result.output, args.out, _meta_text(echo))
    if args.metrics is not None:
        rows = {
            "z_m": [],
            "power": [],
            "centroid_x_m": [],
            "centroid_y_m": [],
            "rms_radius_m": [],
            "core_intensity": [],
        }
        for z, plane in zip(
            np.concatenate([[0.0], result.z]), [fld, *result.planes]
        ):
            m = beam_metrics(plane)
            rows["z_m"].append(z)
            rows["power"].append(m["power"])
            rows["centroid_x_m"].append(m["centroid"][0])
            rows["centroid_y_m"].append(m["centroid"][1])
            rows["rms_radius_m"].append(m["rms_radius"])
            rows["core_intensity"].append(m["core_intensity"])
        write_table(args.metrics, STORAGE_METRICS_KIND, echo, rows)
    return 0


def _parse_mode(text: str) -> tuple[str, int, int]:
    name, sep, tail = text.partition(":")
    if not sep:
        raise UsageError(f"--mode wants family:i,j, got {text!r}")
    parts = tail.split(",")
    if len(parts) != 2:
        raise UsageError(f"--mode wants two indices, got {text!r}")
    try:
        return name.strip(), int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"bad mode indices in {text!r}")


def _parse_taus(items) -> tuple:
    taus = []
    for item in items:
        for piece in item.split(","):
            piece = piece.strip()
            if piece:
                try:
                    taus.append(float(piece))
                except ValueError:
                    raise UsageError(f"bad storage time {piece!r}")
    if not taus:
        raise UsageError("--tau needs at least one time")
    return tuple(taus)


def cmd_store(args) -> int:
    if (args.mode is None) == (args.infile is None):
        raise UsageError("give exactly one of --mode or --in")
    values = load_values(args)
    medium = geom = drive = derived = None
    if values:
        medium, geom, drive = build_params(values)
        derived = derive_params(medium, drive, geom)

    if args.D is not None:
        diffusion = args.D
    elif derived is not None and math.isfinite(derived.D):
        diffusion = derived.D
    else:
        raise ParameterError("need --D or a diffusive medium in --params")
    if args.gamma0 is not None:
        gamma0 = TWO_PI * args.gamma0
    elif medium is not None:
        gamma0 = medium.gamma0
    else:
        gamma0 = 0.0

    if args.infile is not None:
        fld, _ = read_cf2d(args.infile)
        mode_label = f"file:{args.infile}"
    else:
        family, i1, i2 = _parse_mode(args.mode)
        if args.waist is None:
            raise UsageError("--mode needs --waist")
        extent = args.extent if args.extent is not None else 8.0 * args.waist
        optical_q = None
        if args.z != 0.0:
            if geom is None:
                raise ParameterError(
                    "off-focus sampling (--z) needs --params for the "
                    "optical wavenumber"
                )
            optical_q = geom.q
        spec = ModeSpec(
            family=family, i1=i1, i2=i2, w0=args.waist, z=args.z, q=optical_q
        )
        fld = make_mode(spec, square_grid(args.grid, extent))
        mode_label = args.mode

    taus = _parse_taus(args.taus)
    kx, ky = 0.0, 0.0
    if args.k_res is not None:
        parts = args.k_res.split(",")
        if len(parts) != 2:
            raise UsageError("--k-res wants kx,ky in rad/m")
        try:
            kx, ky = float(parts[0]), float(parts[1])
        except ValueError:
            raise UsageError(f"bad --k-res {args.k_res!r}")

    run = StorageRun(
        initial=fld, D=diffusion, gamma0=gamma0, k_res=(kx, ky), taus=taus
    )
    stored = evolve_stored(run)

    echo: dict[str, object] = {
        "command": "store",
        "mode": mode_label,
        "D_m2_s": diffusion,
        "gamma0_rad_s": gamma0,
        "k_res_x_rad_m": kx,
        "k_res_y_rad_m": ky,
        "grid_nx": fld.nx,
        "grid_ny": fld.ny,
        "dx_m": fld.dx,
        "dy_m": fld.dy,
    }
    if medium is not None:
        echo = {**echo_params(medium, geom, drive, derived), **echo}

    rows = {
        "tau_seconds": [],
        "power": [],
        "rms_radius_m": [],
        "core_intensity": [],
    }
    for tau, snap in zip(taus, stored):
        m = beam_metrics(snap)
        rows["tau_seconds"].append(tau)
        rows["power"].append(m["power"])
        rows["rms_radius_m"].append(m["rms_radius"])
        rows["core_intensity"].append(m["core_intensity"])
    write_table(args.metrics, STORAGE_METRICS_KIND, echo, rows)

    if args.out_fields is not None:
        for i, (tau, snap) in enumerate(zip(taus, stored)):
            meta = _meta_text({**echo, "tau_seconds": tau})
            _atomic_cf2d(snap, f"{args.out_fields}{i:03d}.cf2d", meta)
    return 0


def cmd_ramsey(args) -> int:
    values = load_values(args)
    medium = geom = drive = derived = None
    if values:
        medium, geom, drive = build_params(values)
        derived = derive_params(medium, drive, geom)

    if args.D is not None:
        diffusion = args.D
    elif derived is not None and math.isfinite(derived.D):
        diffusion = derived.D
    else:
        raise ParameterError("need --D or a diffusive medium in --params")
    gamma0 = (
        TWO_PI * args.gamma0
        if args.gamma0 is not None
        else (medium.gamma0 if medium is not None else 0.0)
    )
    gammaP = (
        TWO_PI * args.gammap
        if args.gammap is not None
        else (derived.gammaP if derived is not None else 0.0)
    )

    rgeom = RamseyGeometry(
        dimensionality=args.dim,
        a=args.beam_a,
        b=args.wall_b,
        D=diffusion,
        gamma0=gamma0,
        gammaP=gammaP,
    )
    grid = parse_range(args.delta_range, derived)
    correction = ramsey_correction(grid, rgeom, wall_model=args.wall_model)
    chi = chi_ramsey_narrowed(
        grid, rgeom, medium=medium, drive=drive, wall_model=args.wall_model
    )

    echo: dict[str, object] = {
        "command": "ramsey",
        "dimensionality": args.dim,
        "beam_a_m": args.beam_a,
        "wall_b_m": args.wall_b,
        "D_m2_s": diffusion,
        "gamma0_rad_s": gamma0,
        "gammaP_rad_s": gammaP,
        "wall_model": args.wall_model,
        "points": grid.size,
    }
    if medium is not None:
        echo = {**echo_params(medium, geom, drive, derived), **echo}
    if args.length is not None:
        echo["L_m"] = args.length

    columns = spectrum_columns(grid, chi, args.length)
    columns["re_R"] = correction.real
    columns["im_R"] = correction.imag

    if args.out_durations is not None and args.walkers == 0:
        raise UsageError("--out-durations needs --walkers")
    if args.walkers > 0:
        dt = args.dt if args.dt is not None else rgeom.a**2 / (20.0 * diffusion)
        result = simulate_repeated_interaction(
            rgeom, grid, walkers=args.walkers, dt=dt, seed=args.seed
        )
        columns["re_mc_dipole"] = result.spectrum.real
        columns["im_mc_dipole"] = result.spectrum.imag
        echo.update(
            walkers=args.walkers,
            dt_s=dt,
            seed=args.seed,
            mc_backend=result.backend,
            t_max_s=result.meta["t_max"],
        )
        if args.out_durations is not None:
            t_max = result.meta["t_max"]
            edges = np.geomspace(dt / 4.0, t_max, 65)
            centers = np.sqrt(edges[:-1] * edges[1:])
            pdf_in, _ = np.histogram(
                result.stats.t_in, bins=edges, density=True
            )
            pdf_out, _ = np.histogram(
                result.stats.t_out, bins=edges, density=True
            )
            write_table(
                args.out_durations,
                DURATIONS_KIND,
                echo,
                {"t_seconds": centers, "pdf_in": pdf_in, "pdf_out": pdf_out},
            )

    write_table(args.out, SPECTRUM_KIND, echo, columns)
    return 0


def cmd_dicke_demo(args) -> int:
    values = load_values(args)
    medium = geom = None
    if values:
        medium, geom, _drive = build_params(values)
    if args.wavelength is not None:
        q = TWO_PI / args.wavelength
    elif geom is not None:
        q = geom.q
    else:
        raise ParameterError("need --wavelength or --params for the wavenumber")
    speed = args.speed
    if speed is None:
        if medium is None:
            raise ParameterError("need --v or --params for the emitter speed")
        speed = medium.v_T
    spectrum = dicke_emitter_spectrum(
        v=speed,
        q=q,
        collision_rate=args.collision_rate,
        wall_spacing=args.wall_spacing,
        duration=args.duration,
        dt=args.dt,
        seed=args.seed,
    )
    echo = {
        "command": "dicke-demo",
        "v_m_s": speed,
        "q_rad_m": q,
        "collision_rate_per_s": args.collision_rate,
        "wall_spacing_m": (
            args.wall_spacing if args.wall_spacing is not None else math.inf
        ),
        "duration_s": args.duration,
        "dt_s": args.dt,
        "seed": args.seed,
        "sideband_qv_rad_s": q * speed,
    }
    write_table(
        args.out,
        PSD_KIND,
        echo,
        {
            "detuning_hz": spectrum.detunings / TWO_PI,
            "psd": spectrum.chi.real,
        },
    )
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def _add_common(sub) -> None:
    sub.add_argument("--params", help="key=value parameter file")
    sub.add_argument(
        "--set",
        dest="overrides",
        action="append",
        metavar="KEY=VALUE",
        help="override one parameter (file units: Hz for frequencies)",
    )
    sub.add_argument(
        "--threads",
        type=int,
        default=1,
        help="cap internal parallelism (current kernels are serial)",
    )


def _add_scan(sub, required: bool = True) -> None:
    sub.add_argument(
        "--delta-range",
        required=required,
        metavar="LO:HI:N",
        help="detuning scan, endpoints in Hz or gamma multiples",
    )
    sub.add_argument(
        "--L",
        dest="length",
        type=float,
        help="medium length [m] for the transmission column",
    )
    sub.add_argument("--out", required=True, help="spectrum CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polariton-sim",
        description="Spectra and slow-light field transport in warm vapor.",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__} (formats: {FORMAT_BANNER})",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sp = subs.add_parser("spectrum", help="susceptibility lineshape scan")
    _add_common(sp)
    _add_scan(sp)
    sp.add_argument(
        "--model",
        choices=("weak", "strong", "raman", "full", "dicke"),
        default="strong",
        help="collision model / line selection",
    )
    sp.add_argument(
        "--geometry",
        choices=("collinear", "angled"),
        default="collinear",
        help="velocity geometry for --model full",
    )
    sp.add_argument(
        "--nodes", type=int, default=201, help="quadrature nodes for --model full"
    )
    sp.set_defaults(func=cmd_spectrum)

    dr = subs.add_parser(
        "dark-resonance", help="motionally narrowed two-photon resonance"
    )
    _add_common(dr)
    _add_scan(dr)
    dr.set_defaults(func=cmd_dark_resonance)

    orc = subs.add_parser(
        "oracle", help="velocity-discretized steady-state reference solver"
    )
    _add_common(orc)
    _add_scan(orc)
    orc.add_argument("--nodes", type=int, default=201)
    orc.add_argument("--axes", type=int, choices=(1, 2), default=1)
    orc.add_argument(
        "--delta-p", help="one-photon detuning override (Hz or gamma multiple)"
    )
    orc.set_defaults(func=cmd_oracle)

    pr = subs.add_parser("propagate", help="beam transport through the medium")
    _add_common(pr)
    pr.add_argument("--in", dest="infile", required=True, help="input CF2D field")
    pr.add_argument(
        "--L", dest="length", type=float, required=True, help="medium length [m]"
    )
    pr.add_argument(
        "--delta",
        required=True,
        help="two-photon detuning (Hz or gamma multiple)",
    )
    pr.add_argument(
        "--vg",
        help="group velocity override: m/s or qD multiple (quadratic mode)",
    )
    pr.add_argument("--chi-mode", choices=CHI_MODES, default="full-lorentzian")
    pr.add_argument(
        "--theta-c", type=float, default=0.0, help="coupling tilt angle [rad]"
    )
    pr.add_argument("--z-steps", type=int, default=1)
    pr.add_argument("--out", required=True, help="output CF2D field")
    pr.add_argument("--metrics", help="optional per-plane beam metrics CSV")
    pr.set_defaults(func=cmd_propagate)

    st = subs.add_parser("store", help="stored-coherence diffusion evolution")
    _add_common(st)
    st.add_argument("--mode", help="initial mode, e.g. sHG:1,0 or eLG:0,2")
    st.add_argument("--in", dest="infile", help="initial field from a CF2D file")
    st.add_argument("--waist", type=float, help="mode waist w0 [m]")
    st.add_argument("--grid", type=int, default=256, help="grid points per axis")
    st.add_argument(
        "--extent", type=float, help="grid span [m] (default 8 waists)"
    )
    st.add_argument(
        "--z", type=float, default=0.0, help="sampling plane offset [m]"
    )
    st.add_argument(
        "--tau",
        dest="taus",
        action="append",
        required=True,
        metavar="T[,T...]",
        help="storage times [s], repeatable or comma-separated",
    )
    st.add_argument("--D", type=float, help="diffusion coefficient [m^2/s]")
    st.add_argument("--gamma0", type=float, help="decay rate [Hz]")
    st.add_argument("--k-res", help="residual wavevector kx,ky [rad/m]")
    st.add_argument("--metrics", required=True, help="per-tau metrics CSV")
    st.add_argument(
        "--out-fields", help="prefix for per-tau CF2D snapshots (prefixNNN.cf2d)"
    )
    st.set_defaults(func=cmd_store)

    rm = subs.add_parser(
        "ramsey", help="finite-beam spectra: closed form and walker Monte Carlo"
    )
    _add_common(rm)
    _add_scan(rm)
    rm.add_argument("--dim", type=int, choices=(1, 2), default=2)
    rm.add_argument(
        "--a", dest="beam_a", type=float, required=True,
        help="beam half-width/radius [m]",
    )
    rm.add_argument(
        "--b",
        dest="wall_b",
        type=float,
        default=math.inf,
        help="wall distance [m], inf for no walls",
    )
    rm.add_argument("--D", type=float, help="diffusion coefficient [m^2/s]")
    rm.add_argument("--gamma0", type=float, help="dark decoherence rate [Hz]")
    rm.add_argument("--gammap", type=float, help="bright pumping rate [Hz]")
    rm.add_argument("--wall-model", choices=WALL_MODELS, default="as-printed")
    rm.add_argument(
        "--walkers", type=int, default=0, help="Monte Carlo walkers (0 = none)"
    )
    rm.add_argument("--dt", type=float, help="base step [s] (default a^2/20D)")
    rm.add_argument("--seed", type=int, default=0)
    rm.add_argument("--out-durations", help="durations histogram CSV (with MC)")
    rm.set_defaults(func=cmd_ramsey)

    dd = subs.add_parser(
        "dicke-demo", help="moving-emitter power spectrum demonstration"
    )
    _add_common(dd)
    dd.add_argument("--v", dest="speed", type=float, help="emitter speed [m/s]")
    dd.add_argument("--wavelength", type=float, help="optical wavelength [m]")
    dd.add_argument(
        "--collision-rate", type=float, default=0.0, help="Poisson rate [1/s]"
    )
    dd.add_argument("--wall-spacing", type=float, help="bounce walls [m]")
    dd.add_argument("--duration", type=float, default=1e-6)
    dd.add_argument("--dt", type=float, default=1e-10)
    dd.add_argument("--seed", type=int, default=0)
    dd.add_argument("--out", required=True, help="PSD CSV path")
    dd.set_defaults(func=cmd_dicke_demo)

    return parser


_DASH_VALUE_OPTS = frozenset(
    {
        "--delta-range",
        "--delta",
        "--delta-p",
        "--vg",
        "--tau",
        "--k-res",
        "--z",
        "--theta-c",
    }
)


def _fuse_dashed_values(argv: list[str]) -> list[str]:
    """Join options with values like `-1.0gamma` that argparse would
    otherwise read as flags."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (
            tok in _DASH_VALUE_OPTS
            and nxt is not None
            and nxt.startswith("-")
            and not nxt.startswith("--")
            and nxt not in ("-h", "-")
        ):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    args = parser.parse_args(_fuse_dashed_values(argv))
    if args.threads is not None and args.threads < 1:
        print(_fail("usage", "--threads must be >= 1"), file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(_fail("usage", exc), file=sys.stderr)
        return 2
    except ParameterError as exc:
        print(_fail("parameter", exc), file=sys.stderr)
        return 3
    except QuadratureError as exc:
        print(_fail("convergence", exc), file=sys.stderr)
        return 4
    except FileNotFoundError as exc:
        print(_fail("parameter", exc), file=sys.stderr)
        return 3
    except ValueError as exc:
        print(_fail("parameter", exc), file=sys.stderr)
        return 3
    except RuntimeError as exc:
        print(_fail("convergence", exc), file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
