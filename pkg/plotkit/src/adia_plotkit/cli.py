"""Command line: ``adia-plotkit render --spec <file>``."""
from __future__ import annotations

import argparse
import sys

from .errors import PlotkitError
from .render import render
from .spec import load_spec


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adia-plotkit",
        description="Regenerate error vs run-time figures from v1 sweep CSVs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render a figure from a spec file")
    p_render.add_argument("--spec", required=True, help="declarative figure spec")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        written = render(load_spec(args.spec))
    except PlotkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
