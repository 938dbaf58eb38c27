"""Initial-condition generators: Taylor-Green vortices and spinodal noise."""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .spectral import Grid, ScalarField, VectorField, irfft, rfft


def taylor_green(grid: Grid, amplitude: float = 1.0) -> VectorField:
    """Solenoidal Taylor-Green velocity.

    2D: A (sin x cos y, -cos x sin y); 3D: the classical vortex
    A (sin x cos y cos z, -cos x sin y cos z, 0).
    """
    x = grid.coords()
    u = np.zeros((grid.dim,) + grid.shape)
    if grid.dim == 2:
        u[0] = np.sin(x[0]) * np.cos(x[1])
        u[1] = -np.cos(x[0]) * np.sin(x[1])
    else:
        u[0] = np.sin(x[0]) * np.cos(x[1]) * np.cos(x[2])
        u[1] = -np.cos(x[0]) * np.sin(x[1]) * np.cos(x[2])
    return VectorField(grid, amplitude * u, solenoidal=True)


def spinodal_noise(grid: Grid, mean: float, amplitude: float, band: int, seed: int) -> ScalarField:
    """Band-limited random order parameter for quench experiments.

    Seeded white noise is restricted to modes 0 < |k_j| <= band and rescaled
    so max |c - mean| equals amplitude exactly. Deterministic in the seed.
    """
    if band < 1 or band > grid.n // 3:
        raise ConfigError(f"spinodal band must be in [1, n/3], got {band}")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(grid.shape)
    chat = rfft(grid, noise)
    mask = np.ones(grid.spectral_shape, dtype=bool)
    for k in grid.wavenumbers:
        mask &= np.abs(k) <= band
    chat = np.where(mask, chat, 0.0)
    chat[(0,) * grid.dim] = 0.0
    c = irfft(grid, chat)
    peak = np.abs(c).max()
    if peak == 0.0:
        raise ConfigError("degenerate spinodal noise (zero field)")
    return ScalarField(grid, mean + amplitude * (c / peak))


def zero_velocity(grid: Grid) -> VectorField:
    return VectorField(grid, np.zeros((grid.dim,) + grid.shape), solenoidal=True)


def zero_scalar(grid: Grid) -> ScalarField:
    return ScalarField(grid, np.zeros(grid.shape))
