"""
Command-line surface.

Subcommands: simulate, energy-audit, diagnose-commutator, holder-norm,
hypothesis-norm, make-synthetic, lemma1. Exit codes: 0 success, 2 numerical
blow-up (partial artifacts flushed), 64 usage errors, 1 domain/data errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .commutator import cet_identity_residual, remainder_terms, spatial_remainder_terms
from .config import build_initial_state, dump_config, parse_config
from .energy import energy_defect, hypothesis_norm
from .errors import BlowUpError, NschError
from .holder import holder_norm, holder_seminorm, synth_holder_field
from .initial import zero_scalar
from .mollifier import epsilon_ladder, make_mollifier, mollifier_convergence_report
from .reports import DecayReport, decay_fit, read_energy_csv, write_decay_csv
from .snapshots import read_snapshot, write_snapshot
from .solver import State, simulate
from .spectral import Grid

USAGE_EXIT = 64
BLOWUP_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE_EXIT)


def _build_parser() -> _Parser:
    p = _Parser(prog="nschlab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="run a configured simulation")
    s.add_argument("config", type=Path)
    s.add_argument("--print-config", action="store_true",
                   help="echo the canonical configuration before running")

    s = sub.add_parser("energy-audit", help="recompute the defect column of an energy CSV")
    s.add_argument("csv", type=Path, nargs="+",
                   help="one energy CSV, or two (coarse-dt then fine-dt) for a "
                        "first-order extrapolation summary")

    s = sub.add_parser("diagnose-commutator",
                       help="remainder-term decay reports over a radius ladder")
    s.add_argument("snapshots", type=Path, nargs="+")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--eps-count", type=int, default=8)
    s.add_argument("--out", type=Path, default=Path("decay.csv"))
    s.add_argument("--nu", type=float, default=1.0)
    s.add_argument("--gamma", type=float, default=1.0)
    s.add_argument("--mobility", type=float, default=1.0)
    group = s.add_mutually_exclusive_group()
    group.add_argument("--quadrature", dest="backend", action="store_const",
                       const="quadrature", help="lattice-sum convolution (default)")
    group.add_argument("--spectral", dest="backend", action="store_const",
                       const="spectral", help="Fourier-multiplier convolution")
    s.set_defaults(backend="quadrature")

    s = sub.add_parser("holder-norm", help="Hoelder seminorm and full norm of a snapshot velocity")
    s.add_argument("snapshot", type=Path)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--brute-force", action="store_true",
                   help="scan every lattice shift (small grids only)")

    s = sub.add_parser("hypothesis-norm",
                       help="time-integrated Hoelder norm of a snapshot series")
    s.add_argument("snapshots", type=Path, nargs="+")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)

    s = sub.add_parser("make-synthetic", help="write a synthetic rough-velocity snapshot")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--octaves", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dim", type=int, default=2, choices=(2, 3))
    s.add_argument("--out", type=Path, required=True)

    s = sub.add_parser("lemma1", help="mollification-bound ratio report for a snapshot")
    s.add_argument("snapshot", type=Path)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--eps-count", type=int, default=8)
    s.add_argument("--out", type=Path, default=Path("lemma1.csv"))

    return p


def _cmd_simulate(args) -> int:
    cfg = parse_config(args.config.read_text())
    if args.print_config:
        sys.stdout.write(dump_config(cfg))
    state = build_initial_state(cfg)
    try:
        summary = simulate(state, cfg.params, cfg.stepper, cfg.t_end, cfg.output)
    except BlowUpError as err:
        print(f"blow-up: {err}", file=sys.stderr)
        for p in err.artifacts:
            print(f"partial artifact: {p}", file=sys.stderr)
        return BLOWUP_EXIT
    print(f"completed {summary.steps} steps to t={summary.final_state.t:.6g}")
    if summary.energy_csv:
        print(f"energy ledger: {summary.energy_csv}")
    for p in summary.snapshot_paths:
        print(f"snapshot: {p}")
    rec = summary.records[-1]
    print(f"final energy: {rec.total:.12g}  defect: {rec.defect:.6g}  max|c|: {rec.max_abs_c:.6g}")
    return 0


def _cmd_energy_audit(args) -> int:
    if len(args.csv) > 2:
        raise NschError("energy-audit accepts one or two CSV files")
    maxima = []
    for path in args.csv:
        records = read_energy_csv(path)
        stored = [r.defect for r in records]
        recomputed = energy_defect(records)
        drift = max(abs(a - b) for a, b in zip(stored, recomputed)) if records else 0.0
        mx = max(abs(d) for d in recomputed) if recomputed else 0.0
        maxima.append(mx)
        print(f"{path}: max|defect| = {mx:.6g}  (stored-column drift {drift:.3g})")
    if len(maxima) == 2:
        coarse, fine = maxima
        ratio = coarse / fine if fine > 0 else float("inf")
        extrap = 2.0 * fine - coarse  # first-order Richardson residual
        print(f"defect ratio coarse/fine = {ratio:.3f} (first-order scheme expects ~2)")
        print(f"first-order extrapolated defect = {extrap:.6g}")
    return 0


def _load_states(paths):
    states = [read_snapshot(p) for p in paths]
    states.sort(key=lambda s: s.t)
    return states


def _print_reports(reports):
    for rep in reports:
        print(f"{rep.term:>6}: slope {rep.slope:+.3f} (predicted {rep.predicted_slope:+.3f}, "
              f"r2 {rep.r_squared:.3f})  values "
              + " ".join(f"{v:.3e}" for v in rep.values))


def _cmd_diagnose(args) -> int:
    from .potential import PotentialSpec
    from .solver import PhysParams

    states = _load_states(args.snapshots)
    grid = states[0].grid
    params = PhysParams(nu=args.nu, gamma=args.gamma, mobility_m=args.mobility,
                        potential=PotentialSpec("polynomial"))
    eps = epsilon_ladder(grid, args.eps_count)
    if len(states) == 1:
        # single instant: report the spatial terms on a degenerate unit window
        st = states[0]
        values = {t: [] for t in
                  ("I11", "I12", "I21", "I221", "J111", "J112", "J21")}
        residuals = []
        for e in eps:
            kern = make_mollifier(grid, e)
            terms = spatial_remainder_terms(st.u, st.c, params, kern, backend=args.backend)
            for t in values:
                values[t].append(terms[t])
            residuals.append(cet_identity_residual(st.u, kern))
        reports = []
        for t, vals in values.items():
            fit = decay_fit(eps, vals)
            pred = 3.0 * args.alpha - 1.0 if t in ("I11", "I12") else 1.0
            reports.append(DecayReport(t, list(eps), vals, fit.slope, fit.intercept,
                                       fit.r_squared, pred, args.alpha))
        fit = decay_fit(eps, residuals)
        reports.append(DecayReport("CET_residual", list(eps), residuals, fit.slope,
                                   fit.intercept, fit.r_squared, 0.0, args.alpha))
    else:
        ledger = remainder_terms(states, params, eps, args.alpha, backend=args.backend)
        reports = ledger.reports
        residuals = []
        for e in eps:
            kern = make_mollifier(grid, e)
            residuals.append(max(cet_identity_residual(s.u, kern) for s in states))
        fit = decay_fit(eps, residuals)
        reports.append(DecayReport("CET_residual", list(eps), residuals, fit.slope,
                                   fit.intercept, fit.r_squared, 0.0, args.alpha))
        print(f"transport-pairing cancellation: worst |I222+J22|/|I222| = "
              f"{ledger.cancellation_max_rel:.3e}")
    write_decay_csv(reports, args.out)
    _print_reports(reports)
    print(f"decay report: {args.out}")
    return 0


def _cmd_holder(args) -> int:
    state = read_snapshot(args.snapshot)
    sem = holder_seminorm(state.u, args.alpha, brute_force=args.brute_force)
    full = holder_norm(state.u, args.alpha, brute_force=args.brute_force)
    print(f"holder seminorm [u]_alpha (alpha={args.alpha}): {sem:.12g}")
    print(f"holder norm ||u||_C^alpha: {full:.12g}")
    return 0


def _cmd_hypothesis(args) -> int:
    states = _load_states(args.snapshots)
    val = hypothesis_norm(states, args.alpha, args.delta)
    p = 2.0 / (1.0 + args.alpha) + args.delta
    print(f"velocity regularity norm (p={p:.4g}): {val:.12g}")
    return 0


def _cmd_make_synthetic(args) -> int:
    grid = Grid(args.dim, args.n)
    u = synth_holder_field(grid, args.alpha, args.octaves, args.seed)
    state = State(0.0, u, zero_scalar(grid))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_snapshot(state, args.out)
    print(f"wrote synthetic alpha={args.alpha} field to {args.out}")
    return 0


def _cmd_lemma1(args) -> int:
    state = read_snapshot(args.snapshot)
    eps = epsilon_ladder(state.grid, args.eps_count)
    conv2, conv3 = mollifier_convergence_report(state.u, args.alpha, eps)
    write_decay_csv([conv2, conv3], args.out)
    _print_reports([conv2, conv3])
    print(f"ratio report: {args.out}")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "energy-audit": _cmd_energy_audit,
    "diagnose-commutator": _cmd_diagnose,
    "holder-norm": _cmd_holder,
    "hypothesis-norm": _cmd_hypothesis,
    "make-synthetic": _cmd_make_synthetic,
    "lemma1": _cmd_lemma1,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    try:
        return _COMMANDS[args.command](args)
    except BlowUpError as err:
        print(f"blow-up: {err}", file=sys.stderr)
        return BLOWUP_EXIT
    except NschError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"io error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
