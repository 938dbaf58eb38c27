"""
Run configuration: a strict flat key-value format.

Lines are ``section.key = value`` with ``#`` comments; unknown keys, duplicate
keys, malformed numbers and missing required keys are errors carrying the
offending line number. Strictness is deliberate: a silently ignored typo in a
physics parameter would invalidate whatever the run claims to measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from .errors import ConfigError
from .potential import PotentialSpec, stabilization_alpha
from .solver import OutputSpec, PhysParams, StepperConfig
from .spectral import Grid

_REQUIRED = object()


def _parse_bool(s: str) -> bool:
    low = s.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_times(s: str) -> Tuple[float, ...]:
    s = s.strip()
    if not s:
        return ()
    return tuple(float(tok) for tok in s.split(","))


# key -> (converter, default); _REQUIRED means the key must be present
SCHEMA = {
    "grid.dim": (int, _REQUIRED),
    "grid.n": (int, _REQUIRED),
    "params.nu": (float, _REQUIRED),
    "params.gamma": (float, 1.0),
    "params.mobility": (float, 1.0),
    "params.stabilization": (float, None),  # default: alpha/2 for the chosen potential
    "potential.kind": (str, "polynomial"),
    "potential.theta": (float, 1.0),
    "potential.theta_c": (float, 2.0),
    "potential.clamp_delta": (float, 1e-8),
    "stepper.dt": (float, _REQUIRED),
    "stepper.t_end": (float, _REQUIRED),
    "stepper.dealias": (_parse_bool, True),
    "initial.kind": (str, _REQUIRED),
    "initial.mean": (float, 0.0),
    "initial.amplitude": (float, 1.0),
    "initial.band": (int, 4),
    "initial.seed": (int, 0),
    "initial.path": (str, ""),
    "initial.velocity_amplitude": (float, 0.0),
    "output.dir": (str, "out"),
    "output.energy_every": (int, 1),
    "output.snapshot_times": (_parse_times, ()),
}

INITIAL_KINDS = ("taylor_green", "spinodal", "file")


@dataclass
class RunConfig:
    grid: Grid
    params: PhysParams
    stepper: StepperConfig
    t_end: float
    initial_kind: str
    initial_mean: float
    initial_amplitude: float
    initial_band: int
    initial_seed: int
    initial_path: str
    initial_velocity_amplitude: float
    output: OutputSpec


def parse_config(text: str) -> RunConfig:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'section.key = value', got {line.strip()!r}")
        key, _, value = body.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        conv, _default = SCHEMA[key]
        try:
            raw[key] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None

    missing = [k for k, (_, d) in SCHEMA.items() if d is _REQUIRED and k not in raw]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    vals = {k: raw.get(k, d) for k, (_, d) in SCHEMA.items()}

    return _build(vals)


def _build(vals: dict) -> RunConfig:
    grid = Grid(vals["grid.dim"], vals["grid.n"])

    potential = PotentialSpec(
        kind=vals["potential.kind"],
        theta=vals["potential.theta"],
        theta_c=vals["potential.theta_c"],
        clamp_delta=vals["potential.clamp_delta"],
    )
    stab = vals["params.stabilization"]
    if stab is None:
        stab = 0.5 * stabilization_alpha(potential)
    params = PhysParams(
        nu=vals["params.nu"],
        gamma=vals["params.gamma"],
        mobility_m=vals["params.mobility"],
        potential=potential,
        stabilization_S=stab,
    )

    stepper = StepperConfig(dt=vals["stepper.dt"], dealias=vals["stepper.dealias"])
    t_end = vals["stepper.t_end"]
    if t_end <= 0.0:
        raise ConfigError("stepper.t_end must be positive")

    kind = vals["initial.kind"]
    if kind not in INITIAL_KINDS:
        raise ConfigError(f"initial.kind must be one of {INITIAL_KINDS}, got {kind!r}")
    if kind == "file" and not vals["initial.path"]:
        raise ConfigError("initial.kind = file requires initial.path")
    if kind == "spinodal":
        if not (1 <= vals["initial.band"] <= grid.n // 3):
            raise ConfigError(f"initial.band must be in [1, n/3] = [1, {grid.n // 3}]")
    if vals["initial.velocity_amplitude"] < 0.0:
        raise ConfigError("initial.velocity_amplitude must be nonnegative")

    snaps = vals["output.snapshot_times"]
    if any(t < 0.0 or t > t_end for t in snaps):
        raise ConfigError("output.snapshot_times must lie inside [0, t_end]")

    output = OutputSpec(
        directory=Path(vals["output.dir"]),
        energy_every=vals["output.energy_every"],
        snapshot_times=tuple(snaps),
    )
    return RunConfig(
        grid=grid, params=params, stepper=stepper, t_end=t_end,
        initial_kind=kind, initial_mean=vals["initial.mean"],
        initial_amplitude=vals["initial.amplitude"], initial_band=vals["initial.band"],
        initial_seed=vals["initial.seed"], initial_path=vals["initial.path"],
        initial_velocity_amplitude=vals["initial.velocity_amplitude"],
        output=output,
    )


def dump_config(cfg: RunConfig) -> str:
    """Canonical text form; parse(dump(parse(x))) is idempotent."""
    def fmt(v) -> str:
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return f"{v:.17g}"
        return str(v)

    lines = [
        ("grid.dim", cfg.grid.dim),
        ("grid.n", cfg.grid.n),
        ("params.nu", cfg.params.nu),
        ("params.gamma", cfg.params.gamma),
        ("params.mobility", cfg.params.mobility_m),
        ("params.stabilization", cfg.params.stabilization_S),
        ("potential.kind", cfg.params.potential.kind),
        ("potential.theta", cfg.params.potential.theta),
        ("potential.theta_c", cfg.params.potential.theta_c),
        ("potential.clamp_delta", cfg.params.potential.clamp_delta),
        ("stepper.dt", cfg.stepper.dt),
        ("stepper.t_end", cfg.t_end),
        ("stepper.dealias", cfg.stepper.dealias),
        ("initial.kind", cfg.initial_kind),
        ("initial.mean", cfg.initial_mean),
        ("initial.amplitude", cfg.initial_amplitude),
        ("initial.band", cfg.initial_band),
        ("initial.seed", cfg.initial_seed),
        ("initial.path", cfg.initial_path),
        ("initial.velocity_amplitude", cfg.initial_velocity_amplitude),
        ("output.dir", str(cfg.output.directory)),
        ("output.energy_every", cfg.output.energy_every),
        ("output.snapshot_times", ",".join(f"{t:.17g}" for t in cfg.output.snapshot_times)),
    ]
    return "\n".join(f"{k} = {fmt(v)}" for k, v in lines) + "\n"


def build_initial_state(cfg: RunConfig):
    """Construct the initial state a RunConfig describes."""
    from .initial import spinodal_noise, taylor_green, zero_scalar, zero_velocity
    from .snapshots import read_snapshot
    from .solver import State

    g = cfg.grid
    if cfg.initial_kind == "taylor_green":
        return State(0.0, taylor_green(g, cfg.initial_amplitude), zero_scalar(g))
    if cfg.initial_kind == "spinodal":
        c = spinodal_noise(g, cfg.initial_mean, cfg.initial_amplitude,
                           cfg.initial_band, cfg.initial_seed)
        if cfg.initial_velocity_amplitude > 0.0:
            u = taylor_green(g, cfg.initial_velocity_amplitude)
        else:
            u = zero_velocity(g)
        return State(0.0, u, c)
    state = read_snapshot(cfg.initial_path)
    if state.grid != g:
        raise ConfigError(
            f"snapshot grid {state.grid.dim}D n={state.grid.n} does not match "
            f"config grid {g.dim}D n={g.n}"
        )
    return state
