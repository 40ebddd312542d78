"""Command-line front end: ``scattering <command> [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .diagram import factor_exponents, factorize
from .gwquiver import GWRecord, Partition, gw_number, quiver_chi
from .lattice import TwoLineProblem, transport, transported_diagram
from .mutation import classify
from .polyfit import interpolate, to_binomial_basis, verify_vanishing
from .render import RenderSpec, render
from .series import format_rational, primitive_part
from .standard import CACHE_ENV, CacheCorruptionError, TableCache, multi_param_standard
from .verify import SUITES, run_suite

__all__ = ["main", "build_parser", "resolve_cache_dir"]

DEFAULT_CACHE = Path("~/.cache/scattering")


def resolve_cache_dir(flag: str | None) -> Path:
    """Flag, then environment variable, then the per-user default."""
    if flag:
        return Path(flag).expanduser()
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env).expanduser()
    return DEFAULT_CACHE.expanduser()


def _vector(text: str) -> tuple[int, int]:
    parts = text.strip().strip("()").split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected a,b but got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers in {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"cannot parse rational {text!r}") from None


def _partition(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(args, text: str) -> None:
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def _cmd_compute(args, cache: TableCache) -> int:
    if args.multiparam:
        diagram = multi_param_standard(args.mu, args.nu, args.order)
        if args.output:
            Path(args.output).write_text(diagram.to_json())
        print(f"multi-parameter D^{{{args.mu},{args.nu}}} to order {args.order}: "
              f"{len(diagram.rays())} rays over {len(diagram.params)} parameters")
        return 0
    table = cache.table(args.mu, args.nu, args.order)
    if args.json:
        print(_dump(table.to_dict()))
    else:
        print(f"D^{{{args.mu},{args.nu}}} to order {args.order}: {len(table.scattered_directions())} rays, "
              f"{len(table.nonzero())} nonzero coefficients")
        for (a, b), c in table.nonzero().items():
            print(f"  c[{a},{b}] = {format_rational(c)}")
        if cache.directory is not None:
            print(f"cached in {cache.directory}")
    return 0


def _cmd_coeff(args, cache: TableCache) -> int:
    order = args.order if args.order is not None else args.a + args.b
    c = cache.table(args.mu, args.nu, order)[(args.a, args.b)]
    if args.json:
        print(_dump({"schema": "scattering.coeff/1", "mu": args.mu, "nu": args.nu, "a": args.a, "b": args.b,
                     "order": order, "c": format_rational(c)}))
    else:
        print(format_rational(c))
    return 0


def _cmd_wall(args, cache: TableCache) -> int:
    direction, k = primitive_part(*args.dir)
    if k != 1:
        raise ValueError(f"direction {args.dir} is not primitive")
    log_f = cache.diagram(args.mu, args.nu, args.order).log_function(direction)
    fac = factor_exponents(log_f, direction)
    if args.json:
        print(_dump({"schema": "scattering.wall/1", "mu": args.mu, "nu": args.nu, "order": args.order,
                     "direction": list(direction), "factors": fac.to_json()}))
    else:
        print(fac.to_text())
    return 0


def _problem(args) -> TwoLineProblem:
    return TwoLineProblem(args.m1, args.m2, args.d1, args.d2)


def _cmd_lattice(args, cache: TableCache) -> int:
    p = _problem(args)
    f = transport(p, args.m, args.order, cache)
    direction, _ = primitive_part(*args.m)
    fac = factorize(f, direction)
    if args.json:
        print(_dump({"schema": "scattering.wall/1", "m1": list(p.m1), "m2": list(p.m2), "d1": p.d1, "d2": p.d2,
                     "order": args.order, "direction": list(direction), "factors": fac.to_json()}))
    else:
        print(fac.to_text())
    return 0


def _cmd_classify(args, cache: TableCache) -> int:
    verdict = classify(args.a, args.b, args.mu, args.nu)
    print(_dump({"schema": "scattering.verdict/1", **verdict.to_dict()}) if args.json else str(verdict))
    return 0


def _cmd_interpolate(args, cache: TableCache) -> int:
    poly = interpolate(args.a, args.b, cache)
    lam = to_binomial_basis(poly, args.a, args.b)
    report = verify_vanishing(args.a, args.b, cache, poly)
    if args.json:
        print(_dump({
            "schema": "scattering.polynomial/1", "a": args.a, "b": args.b, "polynomial": poly.to_text(),
            "lambda": [[k, l, format_rational(v)] for (k, l), v in sorted(lam.nonzero().items())],
            "zero_cells": [list(z) for z in report.zero_cells], "ok": report.ok,
        }))
    else:
        print(f"c[{args.a},{args.b}] = {poly.to_text()}")
        for (k, l), v in sorted(lam.nonzero().items()):
            print(f"  lambda[{k},{l}] = {format_rational(v)}")
        print(f"vanishing: {'ok' if report.ok else report.violations}")
    return 0 if report.ok else 1


def _cmd_gw(args, cache: TableCache) -> int:
    value = gw_number(args.p1, args.p2, args.order)
    print(_dump(GWRecord(args.p1, args.p2, value).to_dict()))
    return 0


def _cmd_quiver(args, cache: TableCache) -> int:
    order = args.order if args.order is not None else args.a + args.b
    print(_dump(quiver_chi(args.a, args.b, args.mu, args.nu, order, cache).to_dict()))
    return 0


def _cmd_verify(args, cache: TableCache) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    docs = []
    for name in names:
        result = run_suite(name, cache)
        ok &= result.ok
        docs.append(result.to_dict())
        if not args.json:
            for c in result.checks:
                line = f"{'PASS' if c.ok else 'FAIL'} [{name}] {c.name}"
                print(line + (f": {c.detail}" if c.detail and not c.ok else ""))
    if args.json:
        print(_dump(docs[0] if len(docs) == 1 else {"schema": "scattering.verify/1", "suites": docs}))
    return 0 if ok else 1


def _cmd_render(args, cache: TableCache) -> int:
    if args.m1 is not None or args.m2 is not None:
        if args.m1 is None or args.m2 is None:
            raise ValueError("a two-line picture needs both --m1 and --m2")
        diagram = transported_diagram(_problem(args), args.order, cache)
        spec = RenderSpec(args.window, args.label_order, args.format)
    else:
        if args.mu is None or args.nu is None:
            raise ValueError("give --mu and --nu, or --m1 and --m2")
        diagram = cache.diagram(args.mu, args.nu, args.order)
        spec = RenderSpec(args.window, args.label_order, args.format, args.mu, args.nu)
    _emit(args, render(diagram, spec).rstrip("\n"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scattering", description="Exact rank-2 scattering diagram computations.")
    parser.add_argument("--cache-dir", help=f"table cache directory (default: ${CACHE_ENV} or {DEFAULT_CACHE})")
    parser.add_argument("--no-cache", action="store_true", help="keep tables in memory only")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        return p

    def mu_nu(p, required=True):
        p.add_argument("--mu", type=int, required=required)
        p.add_argument("--nu", type=int, required=required)

    def json_flag(p):
        p.add_argument("--json", action="store_true", help="print a JSON record")

    p = command("compute", _cmd_compute, "complete a standard diagram and cache its table")
    mu_nu(p)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--multiparam", action="store_true", help="use one parameter per initial factor")
    p.add_argument("--output", help="write the multi-parameter diagram as JSON")
    json_flag(p)

    p = command("coeff", _cmd_coeff, "print c_{a,b}")
    mu_nu(p)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--order", type=int)
    json_flag(p)

    p = command("wall", _cmd_wall, "factorized wall function of a standard diagram")
    mu_nu(p)
    p.add_argument("--dir", type=_vector, required=True, metavar="A,B")
    p.add_argument("--order", type=int, required=True)
    json_flag(p)

    p = command("lattice", _cmd_lattice, "wall function of a two-line diagram by change of lattice")
    p.add_argument("--m1", type=_vector, required=True, metavar="A,B")
    p.add_argument("--m2", type=_vector, required=True, metavar="A,B")
    p.add_argument("--d1", type=int, default=1)
    p.add_argument("--d2", type=int, default=1)
    p.add_argument("--m", type=_vector, required=True, metavar="A,B")
    p.add_argument("--order", type=int, required=True)
    json_flag(p)

    p = command("classify", _cmd_classify, "region verdict with a mutation witness")
    mu_nu(p)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    json_flag(p)

    p = command("interpolate", _cmd_interpolate, "polynomial in (mu, nu) and its binomial expansion")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    json_flag(p)

    p = command("gw", _cmd_gw, "Gromov-Witten number for a pair of partitions")
    p.add_argument("--p1", type=_partition, required=True, metavar="P", help="parts joined by + or ,")
    p.add_argument("--p2", type=_partition, required=True, metavar="P")
    p.add_argument("--order", type=int)

    p = command("quiver", _cmd_quiver, "quiver Euler characteristic and moduli dimensions")
    mu_nu(p)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--order", type=int)

    p = command("verify", _cmd_verify, "run a self-check suite")
    p.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    json_flag(p)

    p = command("render", _cmd_render, "draw a diagram as SVG or TikZ")
    mu_nu(p, required=False)
    p.add_argument("--m1", type=_vector, metavar="A,B")
    p.add_argument("--m2", type=_vector, metavar="A,B")
    p.add_argument("--d1", type=int, default=1)
    p.add_argument("--d2", type=int, default=1)
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--window", type=_rational, default=Fraction(5), help="half-width of the drawn square")
    p.add_argument("--label-order", type=int, default=2, help="label factors with k up to this")
    p.add_argument("--format", choices=("svg", "tikz"), default="svg")
    p.add_argument("--output", help="write to a file instead of stdout")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cache = TableCache(None if args.no_cache else resolve_cache_dir(args.cache_dir))
        return args.handler(args, cache)
    except CacheCorruptionError as exc:
        print(f"scattering: cache error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ArithmeticError, KeyError, OSError) as exc:
        print(f"scattering: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
