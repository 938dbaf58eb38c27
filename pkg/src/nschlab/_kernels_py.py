"""NumPy fallback implementations of the hot lattice kernels.

Same contracts as the compiled versions in ``_kernels_cy``: offsets are
integer lattice shifts already reduced to [0, n) per axis, ``fields`` are
C-contiguous float64 stacks of shape (m,) + grid shape, and an offset ``o``
addresses the shifted sample f(x - o) (periodic wrap).
"""

from __future__ import annotations

import numpy as np


def _axes(fields: np.ndarray) -> tuple:
    return tuple(range(1, fields.ndim))


def convolve_offsets(fields: np.ndarray, offsets: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """out(x) = sum_j w_j f(x - y_j), per stacked component."""
    out = np.zeros_like(fields)
    ax = _axes(fields)
    for off, w in zip(offsets, weights):
        out += w * np.roll(fields, shift=tuple(off), axis=ax)
    return out


def commutator_tensor(u: np.ndarray, offsets: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """r(x) = sum_j w_j du_j(x) (x) du_j(x), du_j(x) = u(x - y_j) - u(x).

    Returns the symmetric tensor as stacked unique entries in row-major pair
    order: 2D -> (00, 01, 11); 3D -> (00, 01, 02, 11, 12, 22).
    """
    d = u.shape[0]
    pairs = [(a, b) for a in range(d) for b in range(a, d)]
    out = np.zeros((len(pairs),) + u.shape[1:])
    ax = _axes(u)
    for off, w in zip(offsets, weights):
        du = np.roll(u, shift=tuple(off), axis=ax) - u
        for idx, (a, b) in enumerate(pairs):
            out[idx] += w * (du[a] * du[b])
    return out


def shift_maxdiff(fields: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Per offset: max over x of the euclidean norm of f(x - y) - f(x)."""
    ax = _axes(fields)
    out = np.empty(len(offsets))
    for j, off in enumerate(offsets):
        du = np.roll(fields, shift=tuple(off), axis=ax) - fields
        out[j] = np.sqrt((du * du).sum(axis=0).max())
    return out


# The compiled module exposes dimension-specialized entry points; alias them
# so the dispatcher can treat both backends uniformly.
convolve_offsets_2d = convolve_offsets
convolve_offsets_3d = convolve_offsets
commutator_2d = commutator_tensor
commutator_3d = commutator_tensor
shift_maxdiff_2d = shift_maxdiff
shift_maxdiff_3d = shift_maxdiff
