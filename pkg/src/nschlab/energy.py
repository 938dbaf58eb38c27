"""
Energy ledger: the total energy, dissipation rates, and the balance defect.

The total energy is E(t) = integral of (|u|^2/2 + gamma/2 |grad c|^2 + F(c)).
Two viscous rates are recorded side by side because they differ by exactly a
factor two on solenoidal fields:

* viscous_rate  = nu * integral |Du|^2, Du = (grad u + grad u^T)/2,
* grad_sq_rate  = nu * integral |grad u|^2 = 2 * viscous_rate.

The constant-viscosity momentum equation integrated here dissipates kinetic
energy at grad_sq_rate, so the cumulative dissipation feeding the defect is
the trapezoidal integral of grad_sq_rate + mobility_rate. The defect
defect(t) = E(t) + cum_dissipation(t) - E(0)
vanishes for exact solutions; its magnitude on smooth runs is the scheme's
energy-balance error (first order in dt).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import InputError
from .holder import holder_seminorm
from .potential import bulk_energy
from .spectral import VectorField, gradient, gradient_tensor, integral, rfft, irfft


@dataclass
class EnergyRecord:
    t: float
    kinetic: float
    interfacial: float
    bulk: float
    viscous_rate: float
    grad_sq_rate: float
    mobility_rate: float
    max_abs_c: float
    cum_dissipation: float = 0.0
    defect: float = 0.0

    @property
    def total(self) -> float:
        return self.kinetic + self.interfacial + self.bulk

    @property
    def dissipation_rate(self) -> float:
        """Rate entering the balance: grad_sq_rate + mobility_rate."""
        return self.grad_sq_rate + self.mobility_rate


def energy(state, params) -> EnergyRecord:
    """Instantaneous energies and dissipation rates of a state.

    All integrals use the grid quadrature spacing^dim * sum; derivatives are
    spectral; the chemical potential is recomputed from c.
    """
    from .solver import chemical_potential  # deferred: solver imports this module

    g = state.c.grid
    kinetic = 0.5 * integral(g, (state.u.components**2).sum(axis=0))

    gradc = gradient(state.c).components
    interfacial = 0.5 * params.gamma * integral(g, (gradc**2).sum(axis=0))
    bulk = integral(g, bulk_energy(params.potential, state.c.values))

    jac = gradient_tensor(state.u)
    grad_sq = (jac**2).sum(axis=(0, 1))
    sym = 0.5 * (jac + jac.transpose(1, 0, *range(2, jac.ndim)))
    viscous_rate = params.nu * integral(g, (sym**2).sum(axis=(0, 1)))
    grad_sq_rate = params.nu * integral(g, grad_sq)

    mu = chemical_potential(state.c, params)
    gradmu = gradient(mu).components
    mobility_rate = params.mobility_m * integral(g, (gradmu**2).sum(axis=0))

    return EnergyRecord(
        t=state.t, kinetic=kinetic, interfacial=interfacial, bulk=bulk,
        viscous_rate=viscous_rate, grad_sq_rate=grad_sq_rate,
        mobility_rate=mobility_rate, max_abs_c=float(np.abs(state.c.values).max()),
    )


def energy_defect(records: Sequence[EnergyRecord]) -> List[float]:
    """Attach cumulative dissipation and balance defect to a record series.

    defect(t) = E(t) + cum_dissipation(t) - E(0) with trapezoidal cumulation
    of grad_sq_rate + mobility_rate; the first record is the baseline and its
    defect is exactly zero. The series must be strictly time-sorted. Returns
    the defects.
    """
    if not records:
        return []
    ts = [r.t for r in records]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise InputError("energy records must be strictly time-sorted")
    e0 = records[0].total
    cum = 0.0
    records[0].cum_dissipation = 0.0
    records[0].defect = 0.0
    out = [0.0]
    for prev, cur in zip(records, records[1:]):
        cum += 0.5 * (cur.t - prev.t) * (prev.dissipation_rate + cur.dissipation_rate)
        cur.cum_dissipation = cum
        cur.defect = cur.total + cum - e0
        out.append(cur.defect)
    return out


def hypothesis_norm(states, alpha: float, delta: float, shift_budget: int = 24) -> float:
    """Time-integrated Hoelder norm of the velocity:

        ( sum_j w_j * ||u(t_j)||_{C^alpha}^p )^(1/p),  p = 2/(1+alpha) + delta,

    with trapezoidal weights w_j over the snapshot times and
    ||u||_{C^alpha} = max |u| + [u]_alpha.
    """
    if len(states) < 2:
        raise InputError("hypothesis_norm needs at least 2 snapshots")
    ts = np.asarray([s.t for s in states], dtype=np.float64)
    if np.any(np.diff(ts) <= 0):
        raise InputError("snapshots must be strictly time-sorted")
    if not (0.0 < alpha < 1.0):
        raise InputError(f"alpha must be in (0, 1), got {alpha}")
    if delta <= 0.0:
        raise InputError(f"delta must be positive, got {delta}")
    p = 2.0 / (1.0 + alpha) + delta

    w = np.zeros(ts.size)
    dt = np.diff(ts)
    w[:-1] += 0.5 * dt
    w[1:] += 0.5 * dt

    acc = 0.0
    for wj, s in zip(w, states):
        u = s.u
        sup = float(np.sqrt((u.components**2).sum(axis=0)).max())
        norm = sup + holder_seminorm(u, alpha, shift_budget=shift_budget)
        acc += wj * norm**p
    return float(acc ** (1.0 / p))
