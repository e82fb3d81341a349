"""Command-line interface.

Subcommands:
  run-lea      simulate meta algorithms on the shifting-experts scenario, CSV out
  run-oco      same on the shifting convex-optimization scenario
  check-bounds run the randomized bound/property sweeps; nonzero exit on violation
  partition    dump the GC/DS partition of an interval

Flags can also come from a flat key=value config file (--config PATH); file
values override defaults, command-line flags override the file.
"""

from __future__ import annotations

import argparse
import sys

from . import sleeping
from .checks import ALL_CHECKS
from .experiments import RunConfig, run_experiment
from .intervals import Interval, partition_ds, partition_gc


def _parse_seeds(text: str) -> tuple[int, ...]:
    """Either a count ('50' -> seeds 0..49) or an explicit list ('3,7,9')."""
    if "," in text:
        return tuple(int(v) for v in text.split(","))
    return tuple(range(int(text)))


def _parse_metas(text: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _load_config_file(path: str) -> dict[str, str]:
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SystemExit(f"config line without '=': {line!r}")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _add_run_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat key=value file mirroring the flags")
    parser.add_argument("--meta", default="cbce", help="comma list from cbce,saol,atv,fixedshare")
    parser.add_argument("--potential", default="an", choices=["kt", "an"])
    parser.add_argument("--blackbox-potential", default="an", choices=["kt", "an"])
    parser.add_argument("--schedule", default="ds", choices=["gc", "ds"])
    parser.add_argument("--g", type=int, default=2)
    parser.add_argument("--prior", default="uniform", choices=["uniform", "barpi"])
    parser.add_argument("--warm-start", dest="warm_start", action="store_true", default=True)
    parser.add_argument("--no-warm-start", dest="warm_start", action="store_false")
    parser.add_argument("--seeds", default="1", help="count or comma-separated list")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--horizon", type=int, default=900)
    parser.add_argument("--n-segments", type=int, default=3)
    parser.add_argument("--out", required=True, help="output CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cbce", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    lea = sub.add_parser("run-lea", help="shifting-experts experiment")
    _add_run_flags(lea)
    lea.add_argument("--n-experts", type=int, default=1000)
    lea.add_argument("--noise-sigma", type=float, default=0.5)
    lea.add_argument("--favored-bonus", type=float, default=0.5)
    lea.add_argument("--favored-floor", type=float, default=0.0)
    lea.add_argument("--base-offset", type=float, default=0.0)

    oco = sub.add_parser("run-oco", help="shifting convex-optimization experiment")
    _add_run_flags(oco)
    oco.add_argument("--oco-blackbox", default="ftrl", choices=["ftrl", "ogd"])
    oco.add_argument("--dimension", type=int, default=2)
    oco.add_argument("--oco-scale", type=float, default=4.0)
    oco.add_argument("--oco-floor", type=float, default=0.0)

    chk = sub.add_parser("check-bounds", help="randomized bound/property sweeps")
    chk.add_argument("--check", choices=sorted(ALL_CHECKS), action="append",
                     help="run only these sweeps (default: all)")
    chk.add_argument("--t-max", type=int, default=65536, help="range for active-cardinality")
    chk.add_argument("--samples", type=int, default=None, help="override sample counts")
    chk.add_argument("--inject-fault", choices=["truncation"],
                     help="negative control: flip the truncation branch and expect failure")

    part = sub.add_parser("partition", help="dump interval partitions")
    part.add_argument("--start", type=int, required=True)
    part.add_argument("--end", type=int, required=True)
    part.add_argument("--schedule", default="gc", choices=["gc", "ds"])
    part.add_argument("--g", type=int, default=1)
    return parser


def _apply_config_file(parser, argv, args):
    if not getattr(args, "config", None):
        return args
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    subparser = sub_action.choices[args.command]
    defaults = {}
    for key, value in _load_config_file(args.config).items():
        action = next((a for a in subparser._actions if a.dest == key), None)
        if action is None:
            raise SystemExit(f"unknown config key: {key}")
        if action.type is int:
            defaults[key] = int(value)
        elif action.type is float:
            defaults[key] = float(value)
        elif isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            defaults[key] = value.lower() in {"1", "true", "yes", "on"}
        else:
            defaults[key] = value
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _run_config_from_args(args) -> RunConfig:
    kwargs = dict(
        metas=_parse_metas(args.meta),
        potential=args.potential,
        blackbox_potential=args.blackbox_potential,
        schedule=args.schedule,
        g=args.g,
        prior=args.prior,
        warm_start=args.warm_start,
        seeds=_parse_seeds(args.seeds),
        workers=args.workers,
        horizon=args.horizon,
        n_segments=args.n_segments,
    )
    for name in ("n_experts", "noise_sigma", "favored_bonus", "favored_floor", "base_offset",
                 "oco_blackbox", "dimension", "oco_scale", "oco_floor"):
        if hasattr(args, name):
            kwargs[name] = getattr(args, name)
    return RunConfig(**kwargs)


def cmd_run(args, problem: str) -> int:
    try:
        config = _run_config_from_args(args)
    except ValueError as err:
        print(f"invalid config: {err}", file=sys.stderr)
        return 2
    try:
        rows = run_experiment(config, problem=problem, out=args.out)
    except OSError as err:
        print(f"i/o failure: {err}", file=sys.stderr)
        return 1
    print(f"wrote {len(rows) - 1} rows to {args.out}")
    return 0


def cmd_check_bounds(args) -> int:
    names = args.check or sorted(ALL_CHECKS)
    if args.inject_fault == "truncation":
        sleeping.FLIP_TRUNCATION_FAULT = True
    try:
        failures = 0
        for name in names:
            fn = ALL_CHECKS[name]
            kwargs = {}
            if name == "active-cardinality":
                kwargs["t_max"] = args.t_max
            elif args.samples is not None:
                key = "instances" if name in {"sleeping-bound", "meta-bound", "ogd-regret"} else "samples"
                kwargs[key] = args.samples
            report = fn(**kwargs)
            print(report.summary())
            failures += not report.passed
    finally:
        sleeping.FLIP_TRUNCATION_FAULT = False
    if args.inject_fault:
        if failures:
            print("fault injection detected as expected")
            return 0
        print("fault injection NOT detected", file=sys.stderr)
        return 1
    return 1 if failures else 0


def cmd_partition(args) -> int:
    target = Interval(args.start, args.end)
    blocks = partition_gc(target) if args.schedule == "gc" else partition_ds(target, args.g)
    print(" ".join(str(b) for b in blocks))
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _apply_config_file(parser, argv, args)
    if args.command == "run-lea":
        return cmd_run(args, "lea")
    if args.command == "run-oco":
        return cmd_run(args, "oco")
    if args.command == "check-bounds":
        return cmd_check_bounds(args)
    return cmd_partition(args)


if __name__ == "__main__":
    sys.exit(main())
