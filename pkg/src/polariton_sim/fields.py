"""Transverse complex field container, its binary file format, and beam
moment diagnostics shared by the propagation and storage modules.

The grid is periodic and centered: sample (iy, ix) sits at
x = (ix - nx//2) dx, y = (iy - ny//2) dy, so the geometric center of the
beam is an actual sample point. Spectral operations shift to FFT order
internally and shift back, keeping the stored layout centered.

File format CF2D v1 (little-endian): magic ``CF2D``, u32 version, u32 nx,
u32 ny, f64 dx, f64 dy, then nx*ny samples as (re, im) f64 pairs in
row-major order (y rows, x fastest). An optional trailing metadata chunk
``META``, u32 byte length, UTF-8 ``key=value`` lines records the resolved
parameter set of the producing command.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .params import ParameterError

MAGIC = b"CF2D"
META_MAGIC = b"META"
FORMAT_VERSION = 1


@dataclass
class ScalarField2D:
    """Complex scalar envelope on a centered periodic grid.

    data has shape (ny, nx); dx, dy are the sample spacings in meters.
    """

    dx: float
    dy: float
    data: np.ndarray
    warnings: list = field(default_factory=list)

    def __post_init__(self) -> None:
        self.data = np.asarray(self.data, dtype=complex)
        if self.data.ndim != 2:
            raise ParameterError("field data must be 2D")
        ny, nx = self.data.shape
        if nx < 8 or ny < 8:
            raise ParameterError("grid must be at least 8x8")
        if not (self.dx > 0 and self.dy > 0):
            raise ParameterError("sample spacings must be positive")
        if not np.all(np.isfinite(self.data.view(float))):
            raise ParameterError("field contains non-finite samples")

    @property
    def nx(self) -> int:
        return self.data.shape[1]

    @property
    def ny(self) -> int:
        return self.data.shape[0]

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.nx) - self.nx // 2) * self.dx

    @property
    def y(self) -> np.ndarray:
        return (np.arange(self.ny) - self.ny // 2) * self.dy

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Centered coordinate arrays broadcast to the grid shape."""
        return np.meshgrid(self.x, self.y, indexing="xy")

    def k_mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Angular spatial frequencies in FFT order [rad/m]."""
        kx = 2.0 * math.pi * np.fft.fftfreq(self.nx, d=self.dx)
        ky = 2.0 * math.pi * np.fft.fftfreq(self.ny, d=self.dy)
        return np.meshgrid(kx, ky, indexing="xy")

    @property
    def power(self) -> float:
        return float(np.sum(np.abs(self.data) ** 2) * self.dx * self.dy)

    def with_data(self, data: np.ndarray) -> "ScalarField2D":
        """Same grid, new samples."""
        return ScalarField2D(dx=self.dx, dy=self.dy, data=data)

    def normalized(self) -> "ScalarField2D":
        p = self.power
        if p <= 0:
            raise ParameterError("cannot normalize a zero field")
        return self.with_data(self.data / math.sqrt(p))

    def spectrum(self) -> np.ndarray:
        """2D FFT in centered-origin convention (FFT-order output)."""
        return np.fft.fft2(np.fft.ifftshift(self.data))

    def from_spectrum(self, spec: np.ndarray) -> "ScalarField2D":
        return self.with_data(np.fft.fftshift(np.fft.ifft2(spec)))

    @classmethod
    def zeros(cls, nx: int, ny: int, dx: float, dy: float) -> "ScalarField2D":
        return cls(dx=dx, dy=dy, data=np.zeros((ny, nx), dtype=complex))


def square_grid(n: int, extent: float) -> ScalarField2D:
    """Empty n x n field spanning `extent` meters per axis."""
    return ScalarField2D.zeros(n, n, extent / n, extent / n)


def write_cf2d(fld: ScalarField2D, path, meta: dict | None = None) -> None:
    """Write a field in CF2D v1, with an optional metadata appendix."""
    buf = bytearray()
    buf += MAGIC
    buf += struct.pack("<I", FORMAT_VERSION)
    buf += struct.pack("<II", fld.nx, fld.ny)
    buf += struct.pack("<dd", fld.dx, fld.dy)
    interleaved = np.empty((fld.ny, fld.nx, 2), dtype="<f8")
    interleaved[..., 0] = fld.data.real
    interleaved[..., 1] = fld.data.imag
    buf += interleaved.tobytes(order="C")
    if meta:
        text = "\n".join(f"{k}={v}" for k, v in meta.items()).encode("utf-8")
        buf += META_MAGIC
        buf += struct.pack("<I", len(text))
        buf += text
    with open(path, "wb") as fh:
        fh.write(bytes(buf))


def read_cf2d(path) -> tuple[ScalarField2D, dict]:
    """Read a CF2D v1 file, returning the field and its metadata dict."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] != MAGIC:
        raise ParameterError(f"{path}: not a CF2D file (bad magic)")
    version = struct.unpack_from("<I", raw, 4)[0]
    if version != FORMAT_VERSION:
        raise ParameterError(f"{path}: unsupported CF2D version {version}")
    nx, ny = struct.unpack_from("<II", raw, 8)
    dx, dy = struct.unpack_from("<dd", raw, 16)
    offset = 32
    count = nx * ny
    end = offset + 16 * count
    if len(raw) < end:
        raise ParameterError(f"{path}: truncated CF2D payload")
    flat = np.frombuffer(raw, dtype="<f8", count=2 * count, offset=offset)
    data = flat[0::2] + 1j * flat[1::2]
    meta: dict = {}
    if len(raw) >= end + 8 and raw[end : end + 4] == META_MAGIC:
        (length,) = struct.unpack_from("<I", raw, end + 4)
        text = raw[end + 8 : end + 8 + length].decode("utf-8")
        for line in text.splitlines():
            if "=" in line:
                key, _, value = line.partition("=")
                meta[key] = value
    return ScalarField2D(dx=dx, dy=dy, data=data.reshape(ny, nx)), meta


def beam_metrics(fld: ScalarField2D) -> dict:
    """Intensity moments: power, centroid, RMS radius, core intensity.

    rms_radius is the intensity-weighted standard deviation of the radial
    offset from the centroid (w0/sqrt(2) for a Gaussian of 1/e^2 radius
    w0); radius_1e2 = sqrt(2)*rms_radius restates it in the Gaussian
    waist convention. core_intensity compares the central sample to the
    peak, |E(0,0)|^2 / max|E|^2.
    """
    inten = np.abs(fld.data) ** 2
    total = inten.sum()
    if total <= 0 or not math.isfinite(total):
        raise ParameterError("beam_metrics undefined for zero or non-finite field")
    X, Y = fld.mesh()
    cx = float((inten * X).sum() / total)
    cy = float((inten * Y).sum() / total)
    r2 = float((inten * ((X - cx) ** 2 + (Y - cy) ** 2)).sum() / total)
    peak = float(inten.max())
    core = float(inten[fld.ny // 2, fld.nx // 2] / peak)
    return {
        "power": fld.power,
        "centroid": (cx, cy),
        "rms_radius": math.sqrt(r2),
        "radius_1e2": math.sqrt(2.0 * r2),
        "core_intensity": core,
    }
