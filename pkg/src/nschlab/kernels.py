"""Backend dispatch for the hot lattice kernels.

The compiled Cython module is preferred when importable; otherwise the NumPy
roll-based fallback in ``_kernels_py`` is used. Set NSCHLAB_KERNELS=python to
force the fallback (or =cython to fail loudly if the extension is missing).
``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ConfigError
from . import _kernels_py

_requested = os.environ.get("NSCHLAB_KERNELS", "").strip().lower()
if _requested in ("", "cython"):
    try:
        from . import _kernels_cy as _impl
        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        _impl = _kernels_py
        BACKEND = "python"
elif _requested in ("python", "numpy"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    raise ConfigError(f"NSCHLAB_KERNELS must be 'cython' or 'python', got {_requested!r}")


def _prep(fields: np.ndarray, offsets: np.ndarray) -> tuple:
    fields = np.ascontiguousarray(fields, dtype=np.float64)
    dim = fields.ndim - 1
    if dim not in (2, 3):
        raise ConfigError(f"kernels support 2D/3D stacks, got field ndim {fields.ndim}")
    offsets = np.asarray(offsets, dtype=np.int64)
    if offsets.ndim != 2 or offsets.shape[1] != dim:
        raise ConfigError(f"offsets must have shape (J, {dim})")
    # reduce to [0, n) so the compiled wrap (single correction) is valid
    ns = np.asarray(fields.shape[1:], dtype=np.int64)
    offsets = np.ascontiguousarray(np.mod(offsets, ns))
    return fields, offsets, dim


def convolve_offsets(fields: np.ndarray, offsets: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Periodic convolution over explicit lattice offsets.

    out(x) = sum_j weights[j] * fields(x - offsets[j]) for each stacked
    component; fields has shape (m, n, n[, n]).
    """
    fields, offsets, dim = _prep(fields, offsets)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    if weights.shape != (offsets.shape[0],):
        raise ConfigError("weights length must match offsets")
    fn = _impl.convolve_offsets_2d if dim == 2 else _impl.convolve_offsets_3d
    return fn(fields, offsets, weights)


def commutator_tensor(u: np.ndarray, offsets: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Weighted second-moment tensor of periodic increments of u.

    Returns unique entries of the symmetric d x d tensor
    sum_j w_j [u(x-y_j)-u(x)] (x) [u(x-y_j)-u(x)] in row-major pair order.
    """
    u, offsets, dim = _prep(u, offsets)
    if u.shape[0] != dim:
        raise ConfigError("commutator_tensor expects one component per dimension")
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    fn = _impl.commutator_2d if dim == 2 else _impl.commutator_3d
    return fn(u, offsets, weights)


def shift_maxdiff(fields: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Per offset, the sup over the lattice of |fields(x-y) - fields(x)|_2."""
    fields, offsets, dim = _prep(fields, offsets)
    fn = _impl.shift_maxdiff_2d if dim == 2 else _impl.shift_maxdiff_3d
    return fn(fields, offsets)


def tensor_pairs(dim: int) -> list:
    """Index pairs matching the stacked symmetric-tensor layout."""
    return [(a, b) for a in range(dim) for b in range(a, dim)]
