"""
Periodic field representation on the torus (0, 2pi)^d with spectral calculus.

Fields live on a uniform n^d lattice, d in {2, 3}. Transforms use the
Hermitian-reduced (real-to-complex) layout with the mean-value normalization:
the forward transform divides by n^d, so the k=0 coefficient equals the field
mean and mass conservation is a single-coefficient statement.

Derivatives are Fourier multipliers i*k with the unpaired Nyquist mode zeroed,
so that divergence(gradient(f)) == laplacian(f) holds exactly on any data and
the Leray projector commutes with the discrete divergence to round-off.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigError, DomainError


@dataclass(frozen=True)
class Grid:
    """Uniform periodic lattice on the torus (R/2piZ)^dim.

    Wavenumbers are the integer lattice {-n/2+1, ..., n/2} per axis (stored in
    FFT layout, last axis Hermitian-reduced to 0..n/2). The unpaired n/2 mode
    carries no sign information and is dropped from odd derivatives.
    """

    dim: int
    n: int

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ConfigError(f"grid dim must be 2 or 3, got {self.dim}")
        if self.n < 8 or self.n % 2 != 0:
            raise ConfigError(f"grid n must be even and >= 8, got {self.n}")

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.n

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.dim

    @property
    def spectral_shape(self) -> tuple:
        return (self.n,) * (self.dim - 1) + (self.n // 2 + 1,)

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def volume(self) -> float:
        return (2.0 * np.pi) ** self.dim

    @cached_property
    def axis_coords(self) -> np.ndarray:
        return np.arange(self.n) * self.spacing

    def coords(self) -> tuple:
        """Broadcastable coordinate arrays (x_1, ..., x_dim)."""
        return tuple(np.meshgrid(*([self.axis_coords] * self.dim), indexing="ij", sparse=True))

    @cached_property
    def wavenumbers(self) -> tuple:
        """Integer wavenumbers per axis, broadcastable over spectral_shape."""
        full = np.fft.fftfreq(self.n) * self.n
        full = full.astype(np.int64)
        full[self.n // 2] = self.n // 2  # report the unpaired mode as +n/2
        reduced = np.arange(self.n // 2 + 1, dtype=np.int64)
        axes = [full] * (self.dim - 1) + [reduced]
        out = []
        for j, k in enumerate(axes):
            shp = [1] * self.dim
            shp[j] = k.size
            out.append(k.reshape(shp))
        return tuple(out)

    @cached_property
    def _k_deriv(self) -> tuple:
        """Derivative wavenumbers: as `wavenumbers` but with n/2 zeroed."""
        out = []
        for k in self.wavenumbers:
            kd = k.astype(np.float64).copy()
            kd[np.abs(kd) == self.n // 2] = 0.0
            out.append(kd)
        return tuple(out)

    @cached_property
    def ik(self) -> tuple:
        return tuple(1j * kd for kd in self._k_deriv)

    @cached_property
    def k_squared(self) -> np.ndarray:
        k2 = np.zeros(self.spectral_shape)
        for kd in self._k_deriv:
            k2 = k2 + kd**2
        return k2

    @cached_property
    def inv_k_squared(self) -> np.ndarray:
        """1/|k|^2 with the singular k=0 (and unpaired-Nyquist) entries set to 0."""
        k2 = self.k_squared
        with np.errstate(divide="ignore"):
            inv = np.where(k2 > 0, 1.0 / np.where(k2 > 0, k2, 1.0), 0.0)
        return inv

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """Keep modes with |k_j| <= n/3 on every axis (2/3 rule)."""
        cut = self.n // 3
        mask = np.ones(self.spectral_shape, dtype=bool)
        for k in self.wavenumbers:
            mask &= np.abs(k) <= cut
        return mask

    @cached_property
    def hermitian_weights(self) -> np.ndarray:
        """Multiplicity of each stored coefficient in the full spectrum.

        Coefficients with 0 < k_last < n/2 stand for a conjugate pair; the
        k_last = 0 and k_last = n/2 planes are self-conjugate.
        """
        w = np.full(self.n // 2 + 1, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        shp = [1] * self.dim
        shp[-1] = w.size
        return w.reshape(shp)


@dataclass
class ScalarField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape:
            raise ConfigError(
                f"scalar field shape {self.values.shape} != grid shape {self.grid.shape}"
            )

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.values.copy())


@dataclass
class VectorField:
    grid: Grid
    components: np.ndarray  # shape (dim,) + grid.shape
    solenoidal: bool = False

    def __post_init__(self):
        self.components = np.asarray(self.components, dtype=np.float64)
        want = (self.grid.dim,) + self.grid.shape
        if self.components.shape != want:
            raise ConfigError(
                f"vector field shape {self.components.shape} != expected {want}"
            )

    def component(self, j: int) -> np.ndarray:
        return self.components[j]

    def copy(self) -> "VectorField":
        return VectorField(self.grid, self.components.copy(), self.solenoidal)


@dataclass
class SpectralField:
    grid: Grid
    coefficients: np.ndarray  # complex, Hermitian-reduced layout

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=np.complex128)
        if self.coefficients.shape != self.grid.spectral_shape:
            raise ConfigError(
                f"spectral shape {self.coefficients.shape} != expected {self.grid.spectral_shape}"
            )


# -- raw-array transform helpers (used heavily by the solver and diagnostics) --

def rfft(grid: Grid, values: np.ndarray) -> np.ndarray:
    """Forward transform of one or more stacked real fields (mean-normalized)."""
    axes = tuple(range(values.ndim - grid.dim, values.ndim))
    return np.fft.rfftn(values, axes=axes, norm="forward")


def irfft(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    axes = tuple(range(coeffs.ndim - grid.dim, coeffs.ndim))
    return np.fft.irfftn(coeffs, s=grid.shape, axes=axes, norm="forward")


def _finite_or_raise(arr: np.ndarray, what: str) -> np.ndarray:
    if not np.isfinite(arr).all():
        raise DomainError(f"non-finite values in {what}")
    return arr


def to_spectral(f: ScalarField) -> SpectralField:
    return SpectralField(f.grid, rfft(f.grid, f.values))


def to_physical(F: SpectralField) -> ScalarField:
    return ScalarField(F.grid, irfft(F.grid, F.coefficients))


def gradient(f: ScalarField) -> VectorField:
    g = f.grid
    ch = rfft(g, f.values)
    comps = np.stack([irfft(g, ik * ch) for ik in g.ik])
    return VectorField(g, _finite_or_raise(comps, "gradient"))


def laplacian(f: ScalarField) -> ScalarField:
    g = f.grid
    return ScalarField(g, _finite_or_raise(irfft(g, -g.k_squared * rfft(g, f.values)), "laplacian"))


def divergence(v: VectorField) -> ScalarField:
    g = v.grid
    acc = np.zeros(g.spectral_shape, dtype=np.complex128)
    for j in range(g.dim):
        acc += g.ik[j] * rfft(g, v.components[j])
    return ScalarField(g, _finite_or_raise(irfft(g, acc), "divergence"))


def project_coeffs(grid: Grid, vhat: np.ndarray) -> np.ndarray:
    """Leray projection of stacked spectral components; k=0 mode untouched."""
    kdotv = np.zeros(grid.spectral_shape, dtype=np.complex128)
    for j in range(grid.dim):
        kdotv += grid._k_deriv[j] * vhat[j]
    kdotv *= grid.inv_k_squared
    out = vhat.copy()
    for j in range(grid.dim):
        out[j] -= grid._k_deriv[j] * kdotv
    return out


def leray_project(v: VectorField) -> VectorField:
    g = v.grid
    vhat = rfft(g, v.components)
    comps = irfft(g, project_coeffs(g, vhat))
    return VectorField(g, _finite_or_raise(comps, "leray_project"), solenoidal=True)


def dealias(F: SpectralField) -> SpectralField:
    return SpectralField(F.grid, np.where(F.grid.dealias_mask, F.coefficients, 0.0))


def solenoidal_residual(v: VectorField) -> float:
    """max_k |k . u_hat| / max_k |u_hat| (0 for the zero field)."""
    g = v.grid
    vhat = rfft(g, v.components)
    kdotv = np.zeros(g.spectral_shape, dtype=np.complex128)
    for j in range(g.dim):
        kdotv += g._k_deriv[j] * vhat[j]
    vmax = np.abs(vhat).max()
    if vmax == 0.0:
        return 0.0
    return float(np.abs(kdotv).max() / vmax)


def integral(grid: Grid, values: np.ndarray) -> float:
    """Grid quadrature spacing^dim * sum over the lattice."""
    return float(values.sum() * grid.cell_volume)


def mean(grid: Grid, values: np.ndarray) -> float:
    return float(values.mean())


def spectral_sumsq(F: SpectralField) -> float:
    """Sum of |f_hat_k|^2 over the full (unreduced) integer lattice."""
    g = F.grid
    return float((g.hermitian_weights * np.abs(F.coefficients) ** 2).sum())


def mode(F: SpectralField, kvec) -> complex:
    """Coefficient at integer wavevector kvec (conjugated if the reduced
    layout stores only the mirror mode)."""
    g = F.grid
    kvec = tuple(int(k) for k in kvec)
    if len(kvec) != g.dim or any(abs(k) > g.n // 2 for k in kvec):
        raise DomainError(f"wavevector {kvec} outside the lattice")
    conj = kvec[-1] < 0
    if conj:
        kvec = tuple(-k for k in kvec)
    idx = tuple(k % g.n for k in kvec[:-1]) + (kvec[-1],)
    val = complex(F.coefficients[idx])
    return val.conjugate() if conj else val


def vector_to_spectral(v: VectorField) -> np.ndarray:
    return rfft(v.grid, v.components)


def gradient_tensor(v: VectorField) -> np.ndarray:
    """Jacobian d_i u_j as an array of shape (dim, dim) + grid.shape."""
    g = v.grid
    vhat = rfft(g, v.components)
    out = np.empty((g.dim, g.dim) + g.shape)
    for i in range(g.dim):
        for j in range(g.dim):
            out[i, j] = irfft(g, g.ik[i] * vhat[j])
    return out
