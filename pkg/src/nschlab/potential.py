"""
Homogeneous bulk free energy densities and their derivatives.

Two families are provided:

* ``polynomial``: the smooth double well F(s) = (s^2 - 1)^2 / 4 with
  dfdc(s) = s^3 - s. Its curvature d2fdc2 is continuous on all of [-1, 1].
* ``logarithmic``: the Flory-Huggins form
  F(s) = (theta/2) [(1+s) ln(1+s) + (1-s) ln(1-s)] - (theta_c/2) s^2,
  which phase-separates for 0 < theta < theta_c. The log arguments are
  clamped to >= clamp_delta so that field evaluations slightly outside
  (-1, 1) stay finite; the clamp width is part of the spec and is recorded
  in run metadata.

Both satisfy dfdc'(s) >= -alpha with the sharp constant returned by
``stabilization_alpha``: alpha = 1 (polynomial) and alpha = theta_c - theta
(logarithmic).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

KINDS = ("polynomial", "logarithmic")


@dataclass(frozen=True)
class PotentialSpec:
    kind: str = "polynomial"
    theta: float = 1.0
    theta_c: float = 2.0
    clamp_delta: float = 1e-8

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"potential kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "logarithmic":
            if not (0.0 < self.theta < self.theta_c):
                raise ConfigError(
                    "logarithmic potential needs 0 < theta < theta_c "
                    f"(got theta={self.theta}, theta_c={self.theta_c}); "
                    "otherwise there is no phase separation and no positive "
                    "curvature bound"
                )
            if not (0.0 < self.clamp_delta <= 1e-3):
                raise ConfigError(f"clamp_delta must be in (0, 1e-3], got {self.clamp_delta}")


def _check_input(s):
    s = np.asarray(s, dtype=np.float64)
    if np.isnan(s).any():
        raise DomainError("NaN input to potential evaluation")
    return s


def _maybe_scalar(out, s):
    return float(out) if np.isscalar(s) or getattr(s, "ndim", 0) == 0 else out


def bulk_energy(spec: PotentialSpec, s, clamp: bool = True):
    """Free energy density F(s); accepts scalars or arrays."""
    arr = _check_input(s)
    if spec.kind == "polynomial":
        out = 0.25 * (arr**2 - 1.0) ** 2
    else:
        _domain_guard(spec, arr, clamp)
        d = spec.clamp_delta
        p = np.maximum(1.0 + arr, d)
        m = np.maximum(1.0 - arr, d)
        out = 0.5 * spec.theta * ((1.0 + arr) * np.log(p) + (1.0 - arr) * np.log(m))
        out -= 0.5 * spec.theta_c * arr**2
    return _maybe_scalar(out, s)


def dfdc(spec: PotentialSpec, s, clamp: bool = True):
    """First derivative f(s) = F'(s) of the bulk energy."""
    arr = _check_input(s)
    if spec.kind == "polynomial":
        out = arr**3 - arr
    else:
        _domain_guard(spec, arr, clamp)
        d = spec.clamp_delta
        p = np.maximum(1.0 + arr, d)
        m = np.maximum(1.0 - arr, d)
        out = 0.5 * spec.theta * (np.log(p) - np.log(m)) - spec.theta_c * arr
    return _maybe_scalar(out, s)


def d2fdc2(spec: PotentialSpec, s, clamp: bool = True):
    """Second derivative f'(s) = F''(s); bounded below by -stabilization_alpha."""
    arr = _check_input(s)
    if spec.kind == "polynomial":
        out = 3.0 * arr**2 - 1.0
    else:
        _domain_guard(spec, arr, clamp)
        d = spec.clamp_delta
        p = np.maximum(1.0 + arr, d)
        m = np.maximum(1.0 - arr, d)
        out = spec.theta / (p * m) - spec.theta_c
    return _maybe_scalar(out, s)


def _domain_guard(spec: PotentialSpec, arr: np.ndarray, clamp: bool):
    if not clamp and np.any(np.abs(arr) >= 1.0):
        raise DomainError("logarithmic potential undefined for |s| >= 1 without clamping")


def stabilization_alpha(spec: PotentialSpec) -> float:
    """Sharp constant alpha > 0 with F''(s) >= -alpha on the admissible range.

    Polynomial: the minimum of 3s^2 - 1 is -1 at s = 0. Logarithmic: the
    minimum of theta/(1-s^2) - theta_c is theta - theta_c at s = 0, so
    alpha = theta_c - theta (positive by construction of the spec).
    """
    if spec.kind == "polynomial":
        return 1.0
    alpha = spec.theta_c - spec.theta
    if alpha <= 0.0:
        raise ConfigError("logarithmic potential with theta >= theta_c has no positive curvature bound")
    return alpha


def has_continuous_d2fdc2(spec: PotentialSpec) -> bool:
    """True when F'' extends continuously to the closed interval [-1, 1].

    Holds for the polynomial double well only; the logarithmic curvature
    diverges like theta/(1 - s^2) near the endpoints (clamped or not).
    """
    return spec.kind == "polynomial"
