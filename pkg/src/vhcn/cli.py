"""``vhcn`` command line.

Each subcommand assembles a scenario from its flags and hands it to the same
loader and evaluator used by ``vhcn run``; no numbers are computed here.

Exit status:
    0  success
    2  bad command-line usage
    3  scenario/catalog parse error
    4  validation error (a value outside its legal range)
    5  computation error
    6  file could not be read or written
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ComputationError, ScenarioParseError, ScenarioValidationError, VhcnError
from .plot import emit_plane_svg
from .qoe_model import DEFAULT_MATHIS_C, DEFAULT_MSS, NetworkPath
from .report import Report, boundary_section, render_csv, render_text, run
from .scenario import builtin_catalog_text, load_catalog, load_scenario
from .service_plane import boundary_curve
from .units import parse_fraction, parse_rate, parse_time

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_COMPUTATION = 5
EXIT_IO = 6


def _ini(section, **entries):
    lines = [f"[{section}]"]
    for key, value in entries.items():
        if value is not None:
            lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def _emit(report: Report, fmt: str):
    sys.stdout.write(render_csv(report) if fmt == "csv" else render_text(report))


def _cmd_run(args):
    text = Path(args.scenario).read_text(encoding="utf-8")
    scenario = load_scenario(text)
    report = run(scenario, seed=args.seed)
    _emit(report, args.format or scenario.format)


def _cmd_throughput(args):
    text = _ini("path", bit_rate=args.br, rtt=args.rtt, plr=args.plr, mss=args.mss,
                mathis_c=args.c, target=args.target)
    _emit(run(load_scenario(text)), args.format)


def _cmd_contention(args):
    text = _ini("contention", link_capacity=args.capacity, connected_users=args.users,
                simultaneity=args.simultaneity, simultaneous_users=args.active,
                per_user_target=args.target, annual_growth=args.growth, years=args.years,
                growth_base=args.growth_base)
    _emit(run(load_scenario(text)), args.format)


def _cmd_pon_table(args):
    text = _ini("pon", splitting_factor=args.split, fillings=args.fillings, activity=args.activity,
                b_max=args.bmax, availability=args.availability, mc_samples=args.mc_samples, seed=args.seed)
    for spec in args.standard or []:
        name, _, cap = spec.partition("=")
        if not cap:
            raise ScenarioParseError(f"--standard expects NAME=CAPACITY, got {spec!r}", field="standard")
        text += _ini(f"standard {name.strip()}", capacity=cap.strip())
    _emit(run(load_scenario(text)), args.format)


def _cmd_cache(args):
    text = _ini("cache", b_out=args.b_out, b_cache=args.b_cache, b_load=args.b_load)
    _emit(run(load_scenario(text)), args.format)


def _cmd_plane(args):
    if args.catalog:
        catalog_text = Path(args.catalog).read_text(encoding="utf-8")
    else:
        catalog_text = builtin_catalog_text()
    catalog = load_catalog(catalog_text)
    try:
        plr = parse_fraction(args.plr)
        lo, hi = (parse_rate(v) for v in args.range)
        mss = float(args.mss)
        c = float(args.c)
    except ValueError as exc:
        raise ScenarioParseError(str(exc)) from None

    defaults = []
    path = None
    if args.br is not None and args.rtt is not None:
        try:
            br, rtt = parse_rate(args.br), parse_time(args.rtt)
        except ValueError as exc:
            raise ScenarioParseError(str(exc)) from None
        path_text = _ini("path", bit_rate=args.br, rtt=args.rtt, plr=args.plr, mss=args.mss, mathis_c=args.c)
        scenario = load_scenario(path_text + catalog_text) if catalog else load_scenario(path_text)
        defaults = scenario.defaults
        path = NetworkPath(br, rtt, plr, mss, c)
    elif (args.br is None) != (args.rtt is None):
        raise ScenarioValidationError("plane", "--br and --rtt must be given together to classify services")

    try:
        curve = boundary_curve(plr, mss, c, (lo, hi), args.points)
    except VhcnError as exc:
        raise ScenarioValidationError("plane", str(exc)) from None
    sections = [boundary_section(curve)]
    if path is not None:
        sections += run(scenario).sections
    report = Report(f"Service plane (plr={plr:g})", defaults, sections)
    _emit(report, args.format)
    if args.svg:
        Path(args.svg).write_text(emit_plane_svg(catalog, path, curve), encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vhcn", description=__doc__.split("\n\n")[0],
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "csv"), default="text")

    p = sub.add_parser("run", help="evaluate a scenario file")
    p.add_argument("scenario")
    p.add_argument("--format", choices=("text", "csv"), default=None,
                   help="overrides [meta] format (default text)")
    p.add_argument("--seed", type=int, default=None, help="overrides the [pon] Monte Carlo seed")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("throughput", parents=[fmt], help="throughput of one path")
    p.add_argument("--br", required=True, help="channel bit-rate, e.g. 1Gbit")
    p.add_argument("--rtt", required=True, help="round-trip time, e.g. 1ms")
    p.add_argument("--plr", required=True, help="packet loss rate, e.g. 0.001 or 0.1%%")
    p.add_argument("--mss", default=None, help=f"segment size in bytes (default {DEFAULT_MSS})")
    p.add_argument("--c", default=None, help=f"Mathis constant (default {DEFAULT_MATHIS_C})")
    p.add_argument("--target", default=None, help="throughput target (default: --br)")
    p.set_defaults(func=_cmd_throughput)

    p = sub.add_parser("plane", parents=[fmt], help="region boundary and service verdicts")
    p.add_argument("--catalog", default=None, help="service catalog file (default: built-in examples)")
    p.add_argument("--plr", required=True)
    p.add_argument("--br", default=None, help="path bit-rate; with --rtt, classifies the catalog")
    p.add_argument("--rtt", default=None)
    p.add_argument("--mss", default=str(DEFAULT_MSS))
    p.add_argument("--c", default=str(DEFAULT_MATHIS_C))
    p.add_argument("--range", nargs=2, default=("10Mbit", "1Gbit"), metavar=("LOW", "HIGH"))
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--svg", default=None, help="write the plane as SVG to this file")
    p.set_defaults(func=_cmd_plane)

    p = sub.add_parser("contention", parents=[fmt], help="shared-link peak-hour arithmetic")
    p.add_argument("--capacity", required=True, help="link capacity, e.g. 1Gbit")
    p.add_argument("--users", required=True, help="connected users")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--simultaneity", help="fraction of users active at peak, e.g. 10%%")
    grp.add_argument("--active", help="number of users active at peak")
    p.add_argument("--target", default=None, help="per-user target rate, sizes the link")
    p.add_argument("--growth", default=None, help="annual demand growth, e.g. 25%%")
    p.add_argument("--years", default=None)
    p.add_argument("--growth-base", default=None, help="rate to project (default: per-user bit-rate)")
    p.set_defaults(func=_cmd_contention)

    p = sub.add_parser("pon-table", parents=[fmt], help="PON oversubscription table")
    p.add_argument("--split", default=None)
    p.add_argument("--fillings", default=None, help="comma list, e.g. 100%%,60%%,25%%,8%%")
    p.add_argument("--activity", default=None)
    p.add_argument("--availability", default=None)
    p.add_argument("--bmax", default=None)
    p.add_argument("--standard", action="append", metavar="NAME=CAPACITY",
                   help="repeatable; replaces the default standards")
    p.add_argument("--mc-samples", default=None, help="Monte Carlo cross-check samples (>= 10000)")
    p.add_argument("--seed", default=None)
    p.set_defaults(func=_cmd_pon_table)

    p = sub.add_parser("cache", parents=[fmt], help="edge cache bandwidth ledger")
    p.add_argument("--b-out", required=True)
    p.add_argument("--b-cache", required=True)
    p.add_argument("--b-load", default=None)
    p.set_defaults(func=_cmd_cache)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ScenarioParseError as exc:
        print(f"vhcn: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ScenarioValidationError as exc:
        print(f"vhcn: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ComputationError, VhcnError) as exc:
        print(f"vhcn: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    except OSError as exc:
        print(f"vhcn: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
