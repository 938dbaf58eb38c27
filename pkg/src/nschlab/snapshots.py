"""
Binary snapshot files ("NSCH" format, version 1).

Little-endian layout:

    magic   4 bytes   b"NSCH"
    version u32
    dim     u32
    n       u32 per axis (dim entries)
    t       f64
    count   u32       number of fields
    names   16 bytes each, zero-padded ASCII, in order u_1..u_dim, c
    payload count arrays of f64, row-major, n^dim values each

Round trips are bit-exact. Reading validates the magic, version, sizes,
payload length and finiteness, each with its own error type.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import (CorruptHeaderError, NaNPayloadError, TruncatedPayloadError,
                     UnsupportedVersionError)
from .spectral import Grid, ScalarField, VectorField, solenoidal_residual

MAGIC = b"NSCH"
VERSION = 1
NAME_BYTES = 16


def field_names(dim: int) -> list:
    return [f"u_{j + 1}" for j in range(dim)] + ["c"]


def write_snapshot(state, path) -> None:
    from .solver import State  # typing only; avoids an import cycle

    grid = state.grid
    names = field_names(grid.dim)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", VERSION, grid.dim))
        fh.write(struct.pack(f"<{grid.dim}I", *([grid.n] * grid.dim)))
        fh.write(struct.pack("<d", float(state.t)))
        fh.write(struct.pack("<I", len(names)))
        for name in names:
            raw = name.encode("ascii")
            fh.write(raw + b"\x00" * (NAME_BYTES - len(raw)))
        for j in range(grid.dim):
            fh.write(np.ascontiguousarray(state.u.components[j], dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(state.c.values, dtype="<f8").tobytes())


def read_snapshot(path):
    from .solver import State

    path = Path(path)
    blob = path.read_bytes()
    off = 0

    def take(n, what):
        nonlocal off
        if off + n > len(blob):
            raise TruncatedPayloadError(f"{path}: truncated {what}")
        chunk = blob[off:off + n]
        off += n
        return chunk

    if take(4, "header") != MAGIC:
        raise CorruptHeaderError(f"{path}: bad magic (not an NSCH snapshot)")
    version, dim = struct.unpack("<II", take(8, "header"))
    if version != VERSION:
        raise UnsupportedVersionError(f"{path}: unsupported format version {version}")
    if dim not in (2, 3):
        raise CorruptHeaderError(f"{path}: invalid dimension {dim}")
    ns = struct.unpack(f"<{dim}I", take(4 * dim, "header"))
    if len(set(ns)) != 1:
        raise CorruptHeaderError(f"{path}: non-cubic grid {ns} unsupported")
    n = ns[0]
    if n < 8 or n % 2:
        raise CorruptHeaderError(f"{path}: invalid resolution {n}")
    (t,) = struct.unpack("<d", take(8, "header"))
    (count,) = struct.unpack("<I", take(4, "header"))
    expected = field_names(dim)
    if count != len(expected):
        raise CorruptHeaderError(f"{path}: expected {len(expected)} fields, header says {count}")
    names = []
    for _ in range(count):
        raw = take(NAME_BYTES, "header")
        names.append(raw.rstrip(b"\x00").decode("ascii", errors="replace"))
    if names != expected:
        raise CorruptHeaderError(f"{path}: unexpected field names {names}")

    grid = Grid(dim, n)
    size = n**dim
    arrays = []
    for name in names:
        chunk = take(8 * size, f"payload of {name}")
        arr = np.frombuffer(chunk, dtype="<f8").reshape(grid.shape).copy()
        if not np.isfinite(arr).all():
            raise NaNPayloadError(f"{path}: non-finite values in field {name}")
        arrays.append(arr)
    if off != len(blob):
        raise TruncatedPayloadError(f"{path}: {len(blob) - off} trailing bytes after payload")

    u = VectorField(grid, np.stack(arrays[:dim]))
    u.solenoidal = solenoidal_residual(u) <= 1e-10
    return State(float(t), u, ScalarField(grid, arrays[dim]))
