"""Decay-rate fitting and CSV emission for diagnostics and energy ledgers."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import InputError

ENERGY_COLUMNS = [
    "t", "kinetic", "interfacial", "bulk", "total", "viscous_rate",
    "grad_sq_rate", "mobility_rate", "cum_dissipation", "defect", "max_abs_c",
]

DECAY_COLUMNS = ["term", "epsilon", "value", "slope", "predicted_slope", "alpha"]


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    r_squared: float
    n_used: int
    identically_zero: bool = False


def decay_fit(epsilons, values) -> DecayFit:
    """Least-squares line through (log eps, log |value|).

    Zero values are excluded from the fit; if every value is zero, the fit is
    flagged identically_zero with undefined slope.
    """
    eps = np.asarray(epsilons, dtype=np.float64)
    val = np.asarray(values, dtype=np.float64)
    if eps.size < 3:
        raise InputError(f"decay_fit needs at least 3 radii, got {eps.size}")
    if eps.size != val.size:
        raise InputError("epsilons and values must have equal length")
    if np.any(eps <= 0.0):
        raise InputError("epsilons must be positive")
    keep = np.abs(val) > 0.0
    if not keep.any():
        return DecayFit(math.nan, math.nan, math.nan, 0, identically_zero=True)
    x = np.log(eps[keep])
    y = np.log(np.abs(val[keep]))
    if keep.sum() < 2:
        return DecayFit(math.nan, math.nan, math.nan, int(keep.sum()))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float((resid**2).sum()) / ss_tot
    return DecayFit(float(slope), float(intercept), r2, int(keep.sum()))


@dataclass
class DecayReport:
    """Values of one diagnostic over a ladder of mollification radii."""

    term: str
    epsilons: List[float]
    values: List[float]
    slope: float
    intercept: float
    r_squared: float
    predicted_slope: float
    alpha: float

    def __post_init__(self):
        eps = np.asarray(self.epsilons)
        if eps.size > 1 and not np.all(np.diff(eps) < 0):
            raise InputError(f"epsilon ladder for {self.term} must be strictly decreasing")


def write_decay_csv(reports, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(DECAY_COLUMNS)
        for rep in reports:
            for eps, val in zip(rep.epsilons, rep.values):
                w.writerow([rep.term, _fmt(eps), _fmt(val), _fmt(rep.slope),
                            _fmt(rep.predicted_slope), _fmt(rep.alpha)])


def _fmt(x) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def write_energy_csv(records, path) -> None:
    """Energy ledger CSV; 17 significant digits so floats round-trip."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(ENERGY_COLUMNS)
        for r in records:
            w.writerow([_fmt(v) for v in (
                r.t, r.kinetic, r.interfacial, r.bulk, r.total, r.viscous_rate,
                r.grad_sq_rate, r.mobility_rate, r.cum_dissipation, r.defect,
                r.max_abs_c)])


def read_energy_csv(path):
    """Parse an energy CSV back into EnergyRecord objects."""
    from .energy import EnergyRecord

    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ENERGY_COLUMNS:
            raise InputError(f"unexpected energy CSV header in {path}")
        for row in reader:
            vals = dict(zip(ENERGY_COLUMNS, (float(v) for v in row)))
            records.append(EnergyRecord(
                t=vals["t"], kinetic=vals["kinetic"], interfacial=vals["interfacial"],
                bulk=vals["bulk"], viscous_rate=vals["viscous_rate"],
                grad_sq_rate=vals["grad_sq_rate"], mobility_rate=vals["mobility_rate"],
                max_abs_c=vals["max_abs_c"], cum_dissipation=vals["cum_dissipation"],
                defect=vals["defect"]))
    return records
