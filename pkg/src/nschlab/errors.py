"""Exception types shared across the package."""


class NschError(Exception):
    """Base class for all package errors."""


class ConfigError(NschError):
    """Invalid configuration or parameters."""


class DomainError(NschError):
    """Input outside the mathematical domain of an operation (NaN, |s| >= 1, ...)."""


class InputError(NschError):
    """Structurally malformed input (unsorted series, too few samples, ...)."""


class ResolvabilityError(NschError):
    """Mollifier radius too small for the grid spacing."""


class BlowUpError(NschError):
    """Numerical blow-up detected during time stepping."""

    def __init__(self, t: float, dt: float, artifacts=None):
        super().__init__(f"non-finite field values after step to t={t:.6g} (dt={dt:.3g})")
        self.t = t
        self.dt = dt
        self.artifacts = artifacts or []


class SnapshotError(NschError):
    """Base class for snapshot file errors."""


class CorruptHeaderError(SnapshotError):
    pass


class UnsupportedVersionError(SnapshotError):
    pass


class TruncatedPayloadError(SnapshotError):
    pass


class NaNPayloadError(SnapshotError):
    pass
