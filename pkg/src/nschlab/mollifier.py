"""
Periodic mollification by the standard compactly supported bump kernel.

The kernel rho_eps(x) = eps^-d * rho(x/eps) with rho(x) proportional to
exp(-1/(1-|x|^2)) on |x| < 1 is sampled on the lattice (minimum-image
distances) and discretely renormalized to unit mass, i.e.
sum(rho) * spacing^dim = 1 exactly. Two interchangeable convolution routes
exist:

* spectral: multiply by the kernel's Fourier multiplier (fast path);
* quadrature: explicit lattice sum over the kernel's support offsets.

Both act on the same sampled kernel, so they agree to round-off; the
commutator diagnostics use the quadrature route so every term of an identity
shares one discretization (see ``commutator``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, ResolvabilityError
from .holder import holder_seminorm
from .reports import DecayReport, decay_fit
from .spectral import Grid, ScalarField, SpectralField, VectorField, irfft, rfft


@dataclass(frozen=True)
class MollifierKernel:
    grid: Grid
    epsilon: float
    profile: np.ndarray      # rho_eps sampled on the full lattice
    multiplier: np.ndarray   # real Fourier multiplier, 1 at k=0
    offsets: np.ndarray      # (J, dim) integer support offsets
    weights: np.ndarray      # (J,) quadrature weights rho(y)*spacing^dim, sum 1


def make_mollifier(grid: Grid, epsilon: float) -> MollifierKernel:
    """Sample and renormalize the bump kernel of support radius epsilon.

    Requires 3*spacing <= epsilon <= 1 so the bump is resolvable on the grid
    and its support stays well inside the periodic cell.
    """
    h = grid.spacing
    if epsilon < 3.0 * h:
        raise ResolvabilityError(
            f"mollifier radius {epsilon:.4g} below resolvability limit 3*spacing={3*h:.4g}"
        )
    if epsilon > 1.0:
        raise ConfigError(f"mollifier radius must be <= 1, got {epsilon:.4g}")

    r = int(np.ceil(epsilon / h))
    axes = [np.arange(-r, r + 1)] * grid.dim
    mesh = np.meshgrid(*axes, indexing="ij")
    offsets = np.stack([m.ravel() for m in mesh], axis=1)
    dist2 = (np.linalg.norm(offsets, axis=1) * h / epsilon) ** 2
    inside = dist2 < 1.0
    offsets = offsets[inside]
    with np.errstate(divide="ignore", over="ignore"):
        raw = np.exp(-1.0 / (1.0 - dist2[inside]))
    total = raw.sum() * grid.cell_volume
    weights = raw * grid.cell_volume / total

    profile = np.zeros(grid.shape)
    idx = tuple((offsets[:, j] % grid.n) for j in range(grid.dim))
    profile[idx] = raw / total
    multiplier = rfft(grid, profile).real * grid.volume

    return MollifierKernel(grid, float(epsilon), profile, multiplier, offsets, weights)


def mollify(f, kernel: MollifierKernel):
    """Periodic convolution with the kernel (spectral route).

    Accepts ScalarField or VectorField; the multiplier is real and equal to 1
    at k=0, so means are preserved and divergence-free fields stay
    divergence-free.
    """
    g = kernel.grid
    if isinstance(f, ScalarField):
        return ScalarField(g, irfft(g, kernel.multiplier * rfft(g, f.values)))
    if isinstance(f, VectorField):
        out = irfft(g, kernel.multiplier * rfft(g, f.components))
        return VectorField(g, out, solenoidal=f.solenoidal)
    if isinstance(f, SpectralField):
        return SpectralField(g, kernel.multiplier * f.coefficients)
    raise ConfigError(f"cannot mollify object of type {type(f).__name__}")


def mollify_quadrature(arr: np.ndarray, kernel: MollifierKernel) -> np.ndarray:
    """Quadrature route on a raw (m, n, ...) stack; see module docstring."""
    return kernels.convolve_offsets(arr, kernel.offsets, kernel.weights)


def epsilon_ladder(grid: Grid, count: int = 8, eps_max: float = None,
                   eps_min: float = None) -> np.ndarray:
    """Strictly decreasing mollification radii for decay fits.

    Default span is pi/4 down to 4*spacing. On coarse grids where that span
    degenerates (4*spacing close to pi/4) the ladder widens to [3*spacing, 1]
    so slope fits keep a usable range; endpoints always satisfy the
    resolvability bounds of ``make_mollifier``. Explicit eps_max / eps_min
    override the defaults (useful to keep a fit window inside the scaling
    range of a synthetic field).
    """
    h = grid.spacing
    lo, hi = 4.0 * h, np.pi / 4.0
    if hi < 1.5 * lo:
        lo, hi = 3.0 * h, 1.0
    if eps_max is not None:
        hi = eps_max
    if eps_min is not None:
        lo = eps_min
    if not (3.0 * h <= lo and hi <= 1.0):
        raise ResolvabilityError(
            f"ladder [{lo:.4g}, {hi:.4g}] violates the radius bounds [3*spacing, 1]"
        )
    if hi < 1.05 * lo:
        raise ResolvabilityError(f"grid too coarse for an epsilon ladder (spacing {h:.4g})")
    return np.geomspace(hi, lo, count)


def mollifier_convergence_report(f, alpha: float, epsilons, shift_budget: int = 24):
    """Sup-norm mollification-error and mollified-gradient diagnostics.

    For each radius eps computes
      raw2(eps) = max |f - f_eps|          (expected decay ~ eps^alpha)
      raw3(eps) = max |grad f_eps|         (expected decay ~ eps^(alpha-1))
    and normalizes by the measured Hoelder seminorm: values stored in the
    returned reports are the ratios raw2 / (sem * eps^alpha) (at most ~1: the
    kernel has unit mass and support radius eps) and raw3 / (sem *
    eps^(alpha-1)). The fitted slopes refer to the raw maxima, so they are
    directly comparable to the predicted exponents alpha and alpha - 1.

    Returns a (conv2, conv3) pair of DecayReport.
    """
    grid = f.grid
    comps = f.components if isinstance(f, VectorField) else f.values[None]
    sem = holder_seminorm(f, alpha, shift_budget=shift_budget)
    epsilons = np.asarray(sorted(np.atleast_1d(epsilons), reverse=True), dtype=np.float64)

    raw2, raw3, ratio2, ratio3 = [], [], [], []
    for eps in epsilons:
        kern = make_mollifier(grid, eps)
        fhat = rfft(grid, comps)
        fe = irfft(grid, kern.multiplier * fhat)
        m2 = float(np.sqrt(((comps - fe) ** 2).sum(axis=0)).max())
        gsq = np.zeros(grid.shape)
        for j in range(grid.dim):
            de = irfft(grid, grid.ik[j] * (kern.multiplier * fhat))
            gsq += (de**2).sum(axis=0)
        m3 = float(np.sqrt(gsq).max())
        raw2.append(m2)
        raw3.append(m3)
        if sem == 0.0:
            ratio2.append(0.0)
            ratio3.append(0.0)
        else:
            ratio2.append(m2 / (sem * eps**alpha))
            ratio3.append(m3 / (sem * eps ** (alpha - 1.0)))

    fit2 = decay_fit(epsilons, raw2)
    fit3 = decay_fit(epsilons, raw3)
    conv2 = DecayReport("conv2_ratio", list(epsilons), ratio2, fit2.slope, fit2.intercept,
                        fit2.r_squared, predicted_slope=alpha, alpha=alpha)
    conv3 = DecayReport("conv3_ratio", list(epsilons), ratio3, fit3.slope, fit3.intercept,
                        fit3.r_squared, predicted_slope=alpha - 1.0, alpha=alpha)
    return conv2, conv3
