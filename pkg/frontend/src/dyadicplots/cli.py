"""`render` command: one CSV table in, one image file out."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .figures import FigureSpec, SchemaError, render


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render a dyadicint CSV table as a chart")
    parser.add_argument("--kind", choices=("li", "elliptic"), required=True)
    parser.add_argument("--in", dest="input", required=True, metavar="PATH")
    parser.add_argument("--out", dest="output", required=True, metavar="PATH")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    spec = FigureSpec(args.input, args.kind, args.output)
    try:
        render(spec)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
