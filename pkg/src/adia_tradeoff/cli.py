"""Command-line interface.

Subcommands:

* ``sweep``         -- run one configured sweep, write CSV and JSON summary.
* ``closed-forms``  -- closed-form trade-offs across database sizes.
* ``verify``        -- run the desk-scale verification battery.
* ``trace``         -- dump a single propagation as CSV.

Every configuration key can be given in an INI file ([run] section,
``--config``) or as a flag of the same name; flags override the file.
Exit codes: 0 ok, 1 verification failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import sys

from .config import (
    RunConfig,
    write_records_csv,
    write_summary_json,
)
from .errors import AdiabaticError, ConfigError

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG_ERROR = 2

_CONFIG_FLAGS = [
    ("model", str),
    ("schedule", str),
    ("p", int),
    ("N", int),
    ("C", float),
    ("T_list", str),
    ("T_range", str),
    ("quad_tol", float),
    ("integrator_tol", float),
    ("csv_path", str),
    ("json_path", str),
    ("matrix_file", str),
    ("marked", int),
    ("seed", int),
    ("jobs", int),
]


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="INI config file with a [run] section")
    for name, typ in _CONFIG_FLAGS:
        parser.add_argument(f"--{name}", type=typ, default=None, dest=name)


def _load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    overrides = {name: getattr(args, name) for name, _ in _CONFIG_FLAGS}
    config.apply_overrides(overrides)
    return config.validate()


def _cmd_sweep(args) -> int:
    from .sweep import run_sweep

    config = _load_config(args)
    records, summary = run_sweep(config)
    if config.csv_path:
        write_records_csv(records, config.csv_path)
        print(f"wrote {len(records)} records to {config.csv_path}")
    else:
        for record in records:
            print(record.csv_row())
    if config.json_path:
        write_summary_json(summary, config.json_path)
        print(f"wrote summary to {config.json_path}")
    else:
        print(
            f"T_val={summary['T_val']!r} eps_tilde={summary['eps_tilde']!r} "
            f"backend={summary['backend']}"
        )
    return EXIT_OK


def _cmd_closed_forms(args) -> int:
    from .sweep import closed_forms_records

    try:
        n_values = [int(tok) for tok in args.N_list.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"N_list: malformed {args.N_list!r}") from None
    if not n_values or any(n < 2 for n in n_values):
        raise ConfigError("N_list: need integers >= 2")
    records, summary = closed_forms_records(
        n_values, args.schedule, C=args.C, p=args.p or 0
    )
    if args.csv_path:
        write_records_csv(records, args.csv_path)
        print(f"wrote {len(records)} records to {args.csv_path}")
    else:
        for record in records:
            print(record.csv_row())
    if args.json_path:
        write_summary_json(summary, args.json_path)
    else:
        print("exponents:", summary["exponents"])
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verification import run_all

    results = run_all()
    failed = 0
    for result in results:
        print(result.line())
        failed += 0 if result.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


def _cmd_trace(args) -> int:
    from .propagation import propagate
    from .sweep import build_family

    config = _load_config(args)
    if args.T is None or args.T <= 0:
        raise ConfigError("T: a positive run time is required for trace")
    family = build_family(config)
    trace = propagate(family, args.T, tol=config.integrator_tol)
    if args.trace_csv:
        trace.write_csv(args.trace_csv, include_components=args.components)
        print(f"wrote trace ({len(trace.s_grid)} points) to {args.trace_csv}")
    else:
        print(
            f"T={trace.T} final_distance={trace.final_distance!r} "
            f"norm_drift={trace.norm_drift:.3e} steps={trace.n_steps} "
            f"backend={trace.backend}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adia-tradeoff",
        description="Error / run-time trade-offs of the adiabatic approximation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a configured sweep")
    _add_config_flags(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_cf = sub.add_parser("closed-forms", help="closed-form trade-offs across N")
    p_cf.add_argument("--N_list", required=True, help="comma-separated database sizes")
    p_cf.add_argument("--schedule", default="optimal")
    p_cf.add_argument("--p", type=int, default=0)
    p_cf.add_argument("--C", type=float, default=None)
    p_cf.add_argument("--csv_path", default=None)
    p_cf.add_argument("--json_path", default=None)
    p_cf.set_defaults(func=_cmd_closed_forms)

    p_verify = sub.add_parser("verify", help="run the verification battery")
    p_verify.set_defaults(func=_cmd_verify)

    p_trace = sub.add_parser("trace", help="dump one propagation as CSV")
    _add_config_flags(p_trace)
    p_trace.add_argument("--T", type=float, required=True, help="run time")
    p_trace.add_argument("--trace_csv", default=None, help="output CSV path")
    p_trace.add_argument("--components", action="store_true",
                         help="include Re/Im state components")
    p_trace.set_defaults(func=_cmd_trace)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except AdiabaticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED


if __name__ == "__main__":
    sys.exit(main())
