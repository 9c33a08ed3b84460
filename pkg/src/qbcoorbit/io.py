"""Binary and CSV formats for signals, coefficient grids, weights and point sets.

All writers go through a temporary file in the target directory followed
by a rename, so readers never see partial files.
"""
import json
import os
from pathlib import Path
import struct
import tempfile

import numpy as np

__all__ = [
    "FormatError",
    "write_signal",
    "read_signal",
    "write_grid",
    "read_grid",
    "write_weight",
    "read_weight",
    "write_points",
    "read_points",
    "write_json",
    "atomic_write",
]

SIGNAL_MAGIC = b"QBG1"
GRID_MAGIC = b"QBC1"
_C16 = np.dtype("<c16")


class FormatError(ValueError):
    pass


def atomic_write(path, data):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _is_csv(path):
    return str(path).lower().endswith(".csv")


def signal_bytes(values):
    values = np.asarray(values, dtype=_C16).ravel()
    return SIGNAL_MAGIC + struct.pack("<I", values.size) + values.tobytes()


def write_signal(path, values):
    """Write ``QBG1`` binary, or ``index,re,im`` CSV when the path ends in .csv."""
    values = np.asarray(values, dtype=complex).ravel()
    if _is_csv(path):
        lines = ["index,re,im"] + [f"{i},{float(v.real)!r},{float(v.imag)!r}"
                                   for i, v in enumerate(values)]
        atomic_write(path, ("\n".join(lines) + "\n").encode())
    else:
        atomic_write(path, signal_bytes(values))


def read_signal(path):
    if _is_csv(path):
        rows = _read_csv_rows(path, 3)
        idx = np.array([int(r[0]) for r in rows])
        if not np.array_equal(idx, np.arange(idx.size)):
            raise FormatError(f"{path}: indices must run 0..L-1 in order")
        return np.array([complex(float(r[1]), float(r[2])) for r in rows])
    data = Path(path).read_bytes()
    if len(data) < 8 or data[:4] != SIGNAL_MAGIC:
        raise FormatError(f"{path}: not a QBG1 signal file")
    (L,) = struct.unpack("<I", data[4:8])
    if len(data) != 8 + 16 * L:
        raise FormatError(f"{path}: header says L={L} but payload has {len(data) - 8} bytes")
    return np.frombuffer(data, dtype=_C16, offset=8).astype(complex)


def write_grid(path, c, lattice=None):
    """``QBC1`` + u32 N + u32 M + row-major complex payload; lattice JSON in ``path + '.json'``."""
    c = np.asarray(c, dtype=_C16)
    if c.ndim != 2:
        raise FormatError(f"grid must be 2-D, got shape {c.shape}")
    N, M = c.shape
    atomic_write(path, GRID_MAGIC + struct.pack("<II", N, M) + np.ascontiguousarray(c).tobytes())
    if lattice is not None:
        write_json(str(path) + ".json", lattice)


def read_grid(path):
    """Return ``(grid, lattice)``; lattice is None when there is no sidecar."""
    data = Path(path).read_bytes()
    if len(data) < 12 or data[:4] != GRID_MAGIC:
        raise FormatError(f"{path}: not a QBC1 grid file")
    N, M = struct.unpack("<II", data[4:12])
    if len(data) != 12 + 16 * N * M:
        raise FormatError(f"{path}: header says {N}x{M} but payload has {len(data) - 12} bytes")
    c = np.frombuffer(data, dtype=_C16, offset=12).reshape(N, M).astype(complex)
    side = Path(str(path) + ".json")
    lattice = json.loads(side.read_text()) if side.exists() else None
    return c, lattice


def is_grid_file(path):
    with open(path, "rb") as fh:
        return fh.read(4) == GRID_MAGIC


def write_weight(path, values):
    values = np.asarray(values, dtype=float).ravel()
    lines = ["index,value"] + [f"{i},{float(v)!r}" for i, v in enumerate(values)]
    atomic_write(path, ("\n".join(lines) + "\n").encode())


def read_weight(path):
    rows = _read_csv_rows(path, 2)
    idx = np.array([int(r[0]) for r in rows])
    if not np.array_equal(idx, np.arange(idx.size)):
        raise FormatError(f"{path}: indices must run 0..n-1 in order")
    return np.array([float(r[1]) for r in rows])


def write_points(path, points):
    atomic_write(path, "".join(f"{int(x)}\n" for x in np.asarray(points).ravel()).encode())


def read_points(path):
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    try:
        return np.array([int(ln) for ln in lines if ln and not ln.startswith("#")], dtype=int)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None


def write_json(path, obj):
    atomic_write(path, (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode())


def _read_csv_rows(path, width):
    rows = []
    for ln in Path(path).read_text().splitlines():
        ln = ln.strip()
        if not ln:
            continue
        parts = [s.strip() for s in ln.split(",")]
        if not parts[0].lstrip("-").isdigit():
            continue  # header
        if len(parts) != width:
            raise FormatError(f"{path}: expected {width} columns, got {ln!r}")
        rows.append(parts)
    return rows
