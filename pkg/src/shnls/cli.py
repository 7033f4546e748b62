"""Command-line entry point: run, sweep, townes and validate workflows.

Exit codes: 0 success (blow-up detection is a scientific result, not a
failure), 1 validation-suite failure, 2 usage or configuration error,
3 I/O error.  SHNLS_THREADS caps internal FFT parallelism (default:
hardware count).
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import harness, validate as validation
from .groundstate import solve_ground_state
from .harness import ConfigError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shnls",
        description="Pseudospectral solver for the focusing Schrodinger "
                    "equation and its Helmholtz/Newton regularizations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="override the output directory")
        g = p.add_mutually_exclusive_group()
        g.add_argument("--quiet", action="store_true",
                       help="print only the summary line")
        g.add_argument("--verbose", action="store_true",
                       help="enable progress logging")

    p_run = sub.add_parser("run", help="execute one configured run")
    p_run.add_argument("config", help="path to a run TOML file")
    common(p_run)

    p_sweep = sub.add_parser("sweep", help="execute an alpha-continuation sweep")
    p_sweep.add_argument("config", help="path to a sweep TOML file")
    common(p_sweep)

    p_townes = sub.add_parser("townes",
                              help="solve the radial ground-state profile")
    p_townes.add_argument("--sigma", type=float, default=1.0)
    p_townes.add_argument("--dim", type=int, default=2)
    p_townes.add_argument("--bracket", type=float, nargs=2,
                          default=(1.0, 3.0), metavar=("LO", "HI"))
    p_townes.add_argument("--tol", type=float, default=1e-12)
    p_townes.add_argument("--rmax", type=float, default=25.0)
    common(p_townes)

    p_val = sub.add_parser("validate", help="run the built-in property suites")
    p_val.add_argument("--suite", default="all",
                       help="conservation | multipliers | exact | all")
    common(p_val)
    return parser


def _cmd_run(args) -> int:
    config = harness.load_run_config(args.config)
    if args.out:
        config = replace(config,
                         output=replace(config.output, directory=args.out))
    summary = harness.execute(config)
    if not args.quiet:
        print(f"regime: {summary['regime']['label']}"
              + (" (nls-critical sigma)" if summary["regime"]["nls_critical"]
                 else ""))
    line = (f"reason={summary['reason']} t_final={summary['t_final']:g} "
            f"steps={summary['steps']} mass_drift={summary['mass_drift']:.3e} "
            f"out={summary['output_dir']}")
    if summary["blowup_time"] is not None:
        line += f" blowup_time={summary['blowup_time']:g}"
    print(line)
    return 0


def _cmd_sweep(args) -> int:
    sweep = harness.load_sweep_config(args.config)
    if args.out:
        sweep = replace(sweep, directory=args.out)
    report = harness.alpha_sweep(sweep)
    failed = sum(1 for r in report["runs"] if r["status"] != "ok")
    if not args.quiet:
        for row in report["runs"]:
            if row["status"] == "ok":
                print(f"{row['label']}: reason={row['reason']} "
                      f"peak_sup={row['peak_sup_abs']:.6g} "
                      f"peak_grad_sq={row['peak_grad_sq']:.6g}")
            else:
                print(f"{row['label']}: FAILED ({row['error']})")
    print(f"sweep: {len(report['runs'])} runs, {failed} failed, "
          f"report={Path(sweep.directory) / 'sweep_report.json'}")
    return 0


def _cmd_townes(args) -> int:
    try:
        profile = solve_ground_state(args.sigma, args.dim,
                                     bracket=tuple(args.bracket),
                                     tol=args.tol, r_max=args.rmax)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"townes_sigma{args.sigma:g}_dim{args.dim}"
    profile.save(out_dir / f"{stem}.csv")
    print(f"R0 = {profile.R0:.6f}")
    print(f"power = {profile.power:.6f}")
    if not args.quiet:
        print(f"profile written to {out_dir / (stem + '.csv')}")
    return 0


def _cmd_validate(args) -> int:
    names = sorted(validation.SUITES) if args.suite == "all" else [args.suite]
    try:
        results = validation.run_suites(names)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    all_ok = True
    for suite_name, checks in results:
        for name, ok, detail in checks:
            all_ok &= ok
            if not args.quiet or not ok:
                print(f"{'PASS' if ok else 'FAIL'} [{suite_name}] {name}: {detail}")
    print("validate: OK" if all_ok else "validate: FAILED")
    return 0 if all_ok else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if getattr(args, "verbose", False):
        level = logging.INFO
    elif getattr(args, "quiet", False):
        level = logging.ERROR
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": _cmd_run, "sweep": _cmd_sweep, "townes": _cmd_townes,
               "validate": _cmd_validate}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
