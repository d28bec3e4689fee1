"""CSV artifact writers with a byte-stable number format.

Every float is printed with 17 significant digits (`%.16e`), enough to
round-trip an IEEE double exactly, so a repeated run with identical
inputs produces identical bytes. Files are written to a temporary name
in the target directory and renamed into place, never left half-done.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

SPECTRUM_KIND = "spectrum"
DURATIONS_KIND = "durations"
PSD_KIND = "psd"
STORAGE_METRICS_KIND = "storage-metrics"

FORMAT_VERSIONS = {
    SPECTRUM_KIND: 1,
    DURATIONS_KIND: 1,
    PSD_KIND: 1,
    STORAGE_METRICS_KIND: 1,
}


def format_float(value) -> str:
    return f"{float(value):.16e}"


def atomic_write_text(path, text: str) -> None:
    """Write text to `path` through a same-directory temporary file."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(
        prefix=target.name + ".", suffix=".part", dir=target.parent
    )
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def atomic_write_bytes(path, data: bytes) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(
        prefix=target.name + ".", suffix=".part", dir=target.parent
    )
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def render_header(kind: str, params: Mapping[str, object]) -> list[str]:
    """Format the version banner and the resolved-parameter echo."""
    version = FORMAT_VERSIONS[kind]
    lines = [f"# polariton-sim {kind} v{version}"]
    for key, value in params.items():
        if isinstance(value, float):
            text = format_float(value)
        else:
            text = str(value)
        lines.append(f"# {key} = {text}")
    return lines


def write_table(
    path,
    kind: str,
    params: Mapping[str, object],
    columns: Mapping[str, Sequence],
) -> None:
    """Write one CSV artifact: banner, parameter echo, column table."""
    names = list(columns)
    arrays = [np.asarray(columns[name], dtype=float) for name in names]
    if not arrays:
        raise ValueError("a table needs at least one column")
    length = arrays[0].shape[0]
    for name, arr in zip(names, arrays):
        if arr.ndim != 1 or arr.shape[0] != length:
            raise ValueError(f"column {name!r} is not a length-{length} vector")
    lines = render_header(kind, params)
    lines.append(",".join(names))
    rows = np.stack(arrays, axis=1)
    for row in rows:
        lines.append(",".join(format_float(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def spectrum_columns(detunings_rad, chi, L: float | None) -> dict:
    """Standard spectrum table: detuning in Hz, complex chi, transmission.

    Transmission is exp(-2 Im chi L) for a medium of length L; without a
    length the column is filled with the L=0 value 1.
    """
    detunings_rad = np.asarray(detunings_rad, dtype=float)
    chi = np.asarray(chi, dtype=complex)
    if L is None:
        trans = np.ones_like(detunings_rad)
    else:
        trans = np.exp(-2.0 * chi.imag * L)
    return {
        "detuning_hz": detunings_rad / (2.0 * np.pi),
        "re_chi_per_m": chi.real,
        "im_chi_per_m": chi.imag,
        "transmission": trans,
    }
