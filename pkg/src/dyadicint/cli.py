"""Command line front end.

Every subcommand prints one CSV table (or JSON with --format json) to
stdout, or to --out PATH with a reproducibility manifest written next
to it as PATH.manifest.json.  Floats are rendered with 17 significant
digits so values round-trip exactly; output for a given invocation is
byte-identical across runs.

Exit codes: 0 success, 2 domain/configuration error, 3 expression parse
error, 4 verification deviation above --verify-tol.

Grid subcommands honour DYADICINT_THREADS (unset or 1 = serial, 0 =
one thread per CPU); rows are computed independently and emitted in a
fixed order, so threading never changes the output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from typing import Callable, Optional, Sequence

from . import applications, engine, expansions, exprparse
from .dyadic import digit, floor_log
from .errors import (
    ConfigurationError,
    DepthExhaustedError,
    DomainError,
    DyadicIntError,
    IntegrandError,
    RangeError,
)
from .oracle import OracleConfig, adaptive_quad, agm_complete_elliptic, nudged

_VERIFY_CFG = OracleConfig(tol=1e-10)
_HALF_PI = math.pi / 2.0


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _thread_count() -> int:
    raw = os.environ.get("DYADICINT_THREADS", "")
    if raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigurationError(
            f"DYADICINT_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ConfigurationError("DYADICINT_THREADS must be >= 0")
    if n == 0:
        return os.cpu_count() or 1
    return n


def _map_rows(fn: Callable, items: list) -> list:
    """Apply fn to items, optionally threaded; order is always preserved."""
    workers = _thread_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _parse_grid(text: str, flag: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"{flag} must look like LO:HI:STEP, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise DomainError(f"{flag} has a non-numeric part: {text!r}") from None
    if not step > 0.0:
        raise DomainError(f"{flag} step must be > 0")
    if hi < lo:
        raise DomainError(f"{flag} range is reversed")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(count)]


def _parse_levels_list(text: str, flag: str) -> list[int]:
    try:
        values = sorted(int(p) for p in text.split(","))
    except ValueError:
        raise DomainError(f"{flag} must be comma-separated integers") from None
    if not values:
        raise DomainError(f"{flag} must not be empty")
    return values


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        values = sorted(float(p) for p in text.split(","))
    except ValueError:
        raise DomainError(f"{flag} must be comma-separated numbers") from None
    return values


def _integrand(expr: str, variables: tuple[str, ...] = ("x",)):
    ast = exprparse.parse(expr, variables)
    if len(variables) == 1:
        return exprparse.as_function(ast, variables[0])
    return exprparse.as_function2(ast, variables)  # type: ignore[arg-type]


def _signed_oracle(fn, lo: float, hi: float, sign: float) -> float:
    a, b = nudged(lo, hi)
    return sign * adaptive_quad(fn, a, b, _VERIFY_CFG)


def _cmd_integrate(args) -> tuple[list[str], list[dict]]:
    fn = _integrand(args.expr)
    a, b, levels = args.a, args.b, args.levels
    header = ["a", "b", "P", "form", "value", "evaluations", "bound",
              "oracle", "abs_err"]
    if args.form == "inverse":
        if args.inv_expr is None:
            raise DomainError("--inv-expr is required with --form inverse")
        inv_fn = _integrand(args.inv_expr)
        result = engine.integrate_inverse(fn, inv_fn, a, b, levels)
        value = result.value
        sign = 1.0 if b >= a else -1.0
        lo, hi = (a, b) if b >= a else (b, a)
        bound = None
    else:
        sign = 1.0
        lo, hi = a, b
        if b < a:
            if not args.oriented:
                raise DomainError(
                    "reversed limits a > b: pass --oriented to compute the "
                    "signed integral -integrate(f, b, a)")
            sign = -1.0
            lo, hi = b, a
        run = engine.integrate_direct if args.form == "direct" else engine.integrate
        result = run(fn, lo, hi, levels)
        value = sign * result.value
        bound = None
        if args.m1 is not None:
            bound = engine.error_bound(args.m1, lo, hi, levels)
    oracle_value = abs_err = None
    if args.verify:
        oracle_value = _signed_oracle(fn, lo, hi, sign)
        abs_err = abs(value - oracle_value)
    row = {"a": a, "b": b, "P": levels, "form": args.form, "value": value,
           "evaluations": result.evaluations, "bound": bound,
           "oracle": oracle_value, "abs_err": abs_err}
    return header, [row]


def _cmd_integrate2d(args) -> tuple[list[str], list[dict]]:
    fn = _integrand(args.expr, ("x", "y"))
    result = engine.integrate_2d(fn, args.a, args.b, args.c, args.d,
                                 args.levels_x, args.levels_y)
    header = ["a", "b", "c", "d", "P", "Q", "value", "evaluations"]
    row = {"a": args.a, "b": args.b, "c": args.c, "d": args.d,
           "P": args.levels_x, "Q": args.levels_y, "value": result.value,
           "evaluations": result.evaluations}
    if args.verify:
        inner_cfg = OracleConfig(tol=1e-10)
        outer_cfg = OracleConfig(tol=1e-8)

        def x_slice(x: float) -> float:
            return adaptive_quad(lambda y: fn(x, y), args.c, args.d, inner_cfg)

        oracle_value = adaptive_quad(x_slice, args.a, args.b, outer_cfg)
        header += ["oracle", "abs_err"]
        row["oracle"] = oracle_value
        row["abs_err"] = abs(result.value - oracle_value)
    return header, [row]


def _cmd_li(args) -> tuple[list[str], list[dict]]:
    if args.grid is not None:
        xs = _parse_grid(args.grid, "--grid")
        levels_list = _parse_levels_list(args.levels_list, "--levels-list")
    else:
        if args.x is None:
            raise DomainError("pass either --x or --grid")
        xs = [args.x]
        levels_list = [args.levels]
    header = ["x", "P", "value"]
    if args.verify:
        header += ["oracle", "abs_err"]

    def reference(x: float) -> float:
        return adaptive_quad(lambda t: 1.0 / math.log(t), 2.0, x, _VERIFY_CFG)

    oracle_values = (_map_rows(reference, xs) if args.verify else None)

    points = [(i, x, levels) for i, x in enumerate(xs) for levels in levels_list]

    def build(point) -> dict:
        i, x, levels = point
        row = {"x": x, "P": levels, "value": applications.li(x, levels)}
        if oracle_values is not None:
            row["oracle"] = oracle_values[i]
            row["abs_err"] = abs(row["value"] - row["oracle"])
        return row

    return header, _map_rows(build, points)


def _cmd_elliptic(args) -> tuple[list[str], list[dict]]:
    phis = _parse_float_list(args.phi, "--phi")
    hs = _parse_grid(args.hgrid, "--hgrid")
    levels_list = _parse_levels_list(args.levels_list, "--levels-list")
    header = ["phi", "h", "P", "value"]
    if args.verify:
        header += ["oracle", "abs_err"]

    def reference(point) -> float:
        phi, h = point
        if phi == _HALF_PI:
            return agm_complete_elliptic(h)

        def fn(t: float) -> float:
            s = math.sin(t)
            return 1.0 / math.sqrt(1.0 - h * s * s)

        return adaptive_quad(fn, 0.0, phi, _VERIFY_CFG)

    pairs = [(phi, h) for phi in phis for h in hs]
    oracle_values = (dict(zip(pairs, _map_rows(reference, pairs)))
                     if args.verify else None)

    points = [(phi, h, levels) for phi in phis for h in hs
              for levels in levels_list]

    def build(point) -> dict:
        phi, h, levels = point
        row = {"phi": phi, "h": h, "P": levels,
               "value": applications.elliptic_f(phi, h, levels)}
        if oracle_values is not None:
            row["oracle"] = oracle_values[(phi, h)]
            row["abs_err"] = abs(row["value"] - row["oracle"])
        return row

    return header, _map_rows(build, points)


def _cmd_pendulum(args) -> tuple[list[str], list[dict]]:
    if args.esweep is not None:
        energies = _parse_grid(args.esweep, "--esweep")
    else:
        if args.e is None:
            raise DomainError("pass either --e or --esweep")
        energies = [args.e]
    header = ["E", "theta2", "eta", "P", "T"]

    def build(energy: float) -> dict:
        params = applications.PendulumParams(args.m, args.u0, energy)
        return {"E": energy, "theta2": params.turning_angle,
                "eta": params.modulus, "P": args.levels,
                "T": applications.pendulum_period(params, args.levels)}

    return header, _map_rows(build, energies)


def _cmd_advance(args) -> tuple[list[str], list[dict]]:
    fprime = _integrand(args.fprime_expr)
    value = expansions.advance(args.f_at_x, fprime, args.x, args.h, args.levels)
    header = ["x", "h", "P", "f_at_x", "value"]
    return header, [{"x": args.x, "h": args.h, "P": args.levels,
                     "f_at_x": args.f_at_x, "value": value}]


def _cmd_expand_unit(args) -> tuple[list[str], list[dict]]:
    value = expansions.unit_exponential_expansion(args.x, args.s, args.levels)
    header = ["x", "s", "P", "value"]
    return header, [{"x": args.x, "s": args.s, "P": args.levels,
                     "value": value}]


def _cmd_digits(args) -> tuple[list[str], list[dict]]:
    if args.x < 0.0:
        raise DomainError("--x must be >= 0")
    header = ["k", "digit"]
    rows: list[dict] = []
    if args.x > 0.0:
        k_hi = floor_log(args.p, args.x)
        if args.kmin > k_hi:
            raise DomainError(
                f"--kmin {args.kmin} is above the leading scale {k_hi}")
        for k in range(k_hi, args.kmin - 1, -1):
            rows.append({"k": k, "digit": digit(args.p, k, args.x)})
    return header, rows


def _render_csv(header: list[str], rows: list[dict]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(col)) for col in header))
    return "\n".join(lines) + "\n"


def _render_json(header: list[str], rows: list[dict]) -> str:
    out = [{col: row.get(col) for col in header} for row in rows]
    return json.dumps(out, indent=2) + "\n"


def _write_manifest(args, out_path: str) -> None:
    parameters = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = {
        "subcommand": args.command,
        "parameters": parameters,
        "form": getattr(args, "form", None),
        "levels": getattr(args, "levels", None),
        "output": out_path,
        "verify": bool(getattr(args, "verify", False)),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    with open(out_path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _add_output_options(sub, verify: bool = True) -> None:
    sub.add_argument("--out", help="write the table to this path instead of stdout")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    if verify:
        sub.add_argument("--verify", action="store_true",
                         help="append an independent oracle value and deviation")
        sub.add_argument("--verify-tol", type=float, default=1e-2,
                         help="exit 4 when any |value - oracle| exceeds this")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyadicint",
        description="Definite integrals as truncated series over dyadic rationals.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("integrate", help="one definite integral")
    p.add_argument("--expr", required=True, help="integrand in x")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--levels", type=int, default=16, metavar="P")
    p.add_argument("--form", choices=("direct", "shifted", "inverse"),
                   default="shifted")
    p.add_argument("--inv-expr", help="inverse function (for --form inverse)")
    p.add_argument("--oriented", action="store_true",
                   help="allow a > b and negate the reversed integral")
    p.add_argument("--m1", type=float,
                   help="bound on |f'| over [a, b]; fills the bound column")
    _add_output_options(p)
    p.set_defaults(func=_cmd_integrate)

    p = subs.add_parser("integrate2d", help="double integral on a rectangle")
    p.add_argument("--expr", required=True, help="integrand in x and y")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--levels-x", type=int, default=10, metavar="P")
    p.add_argument("--levels-y", type=int, default=10, metavar="Q")
    _add_output_options(p)
    p.set_defaults(func=_cmd_integrate2d)

    p = subs.add_parser("li", help="logarithmic integral from 2")
    p.add_argument("--x", type=float)
    p.add_argument("--grid", help="x values as LO:HI:STEP")
    p.add_argument("--levels", type=int, default=16, metavar="P")
    p.add_argument("--levels-list", default="10",
                   help="comma-separated truncation depths for --grid")
    _add_output_options(p)
    p.set_defaults(func=_cmd_li)

    p = subs.add_parser("elliptic", help="incomplete elliptic integral F(phi|h)")
    p.add_argument("--phi", required=True,
                   help="amplitude(s), comma-separated")
    p.add_argument("--hgrid", required=True, help="parameters as LO:HI:STEP")
    p.add_argument("--levels-list", default="10")
    _add_output_options(p)
    p.set_defaults(func=_cmd_elliptic)

    p = subs.add_parser("pendulum", help="libration period in a cosine well")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--u0", type=float, required=True)
    p.add_argument("--e", type=float, help="energy, -U0 < E < U0")
    p.add_argument("--esweep", help="energies as LO:HI:STEP")
    p.add_argument("--levels", type=int, default=16, metavar="P")
    _add_output_options(p, verify=False)
    p.set_defaults(func=_cmd_pendulum)

    p = subs.add_parser("advance", help="f(x+h) from f(x) and a series of f'")
    p.add_argument("--fprime-expr", required=True)
    p.add_argument("--f-at-x", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--levels", type=int, default=16, metavar="P")
    _add_output_options(p, verify=False)
    p.set_defaults(func=_cmd_advance)

    p = subs.add_parser("expand-unit",
                        help="weighted-exponential expansion of x in (0,1]")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--s", type=int, default=0, help="scale shift")
    p.add_argument("--levels", type=int, default=16, metavar="P")
    _add_output_options(p, verify=False)
    p.set_defaults(func=_cmd_expand_unit)

    p = subs.add_parser("digits", help="radix digits of x, leading scale down")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--kmin", type=int, required=True)
    _add_output_options(p, verify=False)
    p.set_defaults(func=_cmd_digits)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        header, rows = args.func(args)
    except exprparse.ParseError as exc:
        print(f"expression error {exc}", file=sys.stderr)
        return 3
    except IntegrandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, RangeError, ConfigurationError,
            DepthExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DyadicIntError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    body = (_render_csv(header, rows) if args.format == "csv"
            else _render_json(header, rows))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body)
        _write_manifest(args, args.out)
    else:
        sys.stdout.write(body)

    if getattr(args, "verify", False):
        tol = args.verify_tol
        for row in rows:
            err = row.get("abs_err")
            if err is not None and err > tol:
                print(f"verification deviation {_fmt(err)} exceeds "
                      f"--verify-tol {_fmt(tol)}", file=sys.stderr)
                return 4
    return 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
