"""
nschlab: a pseudo-spectral solver for incompressible two-phase flow with a
conserved order parameter, plus the mollification diagnostics (commutator
fluxes, Hoelder estimators, remainder-term decay fits) used to audit the
energy balance.
"""

from .commutator import (RemainderLedger, cet_commutator, cet_identity_residual,
                         remainder_terms, spatial_remainder_terms)
from .energy import EnergyRecord, energy, energy_defect, hypothesis_norm
from .errors import (BlowUpError, ConfigError, CorruptHeaderError, DomainError,
                     InputError, NaNPayloadError, NschError, ResolvabilityError,
                     SnapshotError, TruncatedPayloadError, UnsupportedVersionError)
from .holder import holder_norm, holder_seminorm, synth_holder_field
from .initial import spinodal_noise, taylor_green, zero_scalar, zero_velocity
from .kernels import BACKEND as KERNEL_BACKEND
from .mollifier import (MollifierKernel, epsilon_ladder, make_mollifier, mollify,
                        mollifier_convergence_report)
from .potential import (PotentialSpec, bulk_energy, d2fdc2, dfdc,
                        has_continuous_d2fdc2, stabilization_alpha)
from .reports import DecayFit, DecayReport, decay_fit, write_decay_csv, write_energy_csv
from .solver import (OutputSpec, PhysParams, RunSummary, State, StepperConfig,
                     capillary_force, capillary_force_divform, chemical_potential,
                     simulate, step)
from .spectral import (Grid, ScalarField, SpectralField, VectorField, dealias,
                       divergence, gradient, integral, laplacian, leray_project,
                       mode, solenoidal_residual, spectral_sumsq, to_physical,
                       to_spectral)

__version__ = "0.1.0"
