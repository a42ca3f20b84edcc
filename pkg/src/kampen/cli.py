"""Command-line entry point.

Machine-readable output goes to stdout (JSON by default, or the format named
by --format or the KAMPEN_FORMAT environment variable); diagnostics go to
stderr.  Exit status: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .core import WordParseError, format_word, parse_word, u_word
from .diagram import (
    Diagram,
    DiagramError,
    LetterClass,
    boundary_word,
    count_report,
    detect_annuli,
    is_reduced,
    trace_bands,
    validate,
)
from .fill import FillReport, build_trapezium, fill_report, _fill_raw
from .wordproblem import DomainError, geodesic_distance, normal_form

SCHEMA_VERSION = 1
FORMATS = ("json", "text", "csv")
EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- output -------------------------------------------------------------------


def _text_lines(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _text_lines(v, f"{prefix}{k}.")
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            yield from _text_lines(v, f"{prefix}{i}.")
    else:
        yield f"{prefix[:-1]}: {json.dumps(obj)}"


def _emit(payload: dict, fmt: str, out=None):
    out = out or sys.stdout
    body = {"schema_version": SCHEMA_VERSION, **payload}
    if fmt == "text":
        out.write("\n".join(_text_lines(body)) + "\n")
    elif fmt == "csv":
        raise UsageError("csv output is only available for curve and geodesic")
    else:
        out.write(json.dumps(body, indent=2, sort_keys=True) + "\n")


def _write_diagram(d: Diagram, path: str | None):
    if path:
        Path(path).write_text(d.dumps())
        print(f"wrote {path}", file=sys.stderr)


def _load_diagram(path: str) -> Diagram:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e
    try:
        return Diagram.loads(text)
    except (ValueError, KeyError, TypeError) as e:
        raise DiagramError(f"{path} is not a diagram file: {e}") from e


def _word(text: str):
    try:
        return parse_word(text)
    except WordParseError as e:
        raise UsageError(str(e)) from e


# -- verbs ----------------------------------------------------------------------


def cmd_solve(args) -> int:
    w = _word(args.word)
    nf = normal_form(w)
    _emit({"input": format_word(w), **nf.to_dict(), "is_identity": nf.is_identity}, args.format)
    return EXIT_OK


def cmd_dist(args) -> int:
    w = _word(args.word)
    d = geodesic_distance(w, cap=args.cap)
    _emit({"input": format_word(w), "cap": args.cap, "distance": d, "within_cap": d is not None}, args.format)
    return EXIT_OK


def _report_payload(rep: FillReport) -> dict:
    return rep.to_dict()


def cmd_trapezium(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    d = build_trapezium(args.n)
    census = count_report(d)
    rep = FillReport(u_word(args.n), d.perimeter, d.area, d.area, census.diameter, 2 * args.n, True, census)
    _write_diagram(d, args.out)
    _emit(_report_payload(rep), args.format)
    return EXIT_OK


def cmd_fill(args) -> int:
    w = _word(args.word)
    if args.raw:
        d, steps = _fill_raw(w)
        _write_diagram(d, args.out)
        _emit({"input_word": format_word(w), "area": d.area, "perimeter": d.perimeter,
               "theta_steps": steps, "reduced": is_reduced(d)}, args.format)
        return EXIT_OK
    rep, d = fill_report(w)
    _write_diagram(d, args.out)
    _emit(_report_payload(rep), args.format)
    return EXIT_OK


def _band_summary(d: Diagram) -> dict:
    out = {}
    for cls in LetterClass:
        bands = trace_bands(d, cls)
        out[cls.value] = {
            "count": len(bands),
            "closed": sum(b.closed for b in bands),
            "lengths": sorted(len(b) for b in bands),
        }
    return out


def cmd_analyze(args) -> int:
    d = _load_diagram(args.diagram)
    rep = validate(d)
    payload: dict = {"valid": rep.ok, "violations": rep.violations}
    if not rep.ok:
        _emit(payload, args.format)
        return EXIT_DOMAIN
    reduced = is_reduced(d)
    payload.update(
        boundary_word=format_word(boundary_word(d)),
        area=d.area,
        perimeter=d.perimeter,
        reduced=reduced,
        census=count_report(d).to_dict() if reduced else None,
        bands=_band_summary(d),
        annuli=[a.to_dict() for a in detect_annuli(d)],
    )
    _emit(payload, args.format)
    return EXIT_OK


def cmd_curve(args) -> int:
    from .experiments import curve_csv, dehn_curve, loglog_slope

    if args.max_n < args.min_n:
        raise UsageError("--max-n must be >= --min-n")
    pts = dehn_curve(args.max_n, n_min=args.min_n, with_fill=not args.no_fill, workers=args.workers)
    csv_text = curve_csv(pts, timing=args.timing)
    if args.out:
        Path(args.out).write_text(csv_text)
        print(f"wrote {args.out}", file=sys.stderr)
    if args.format == "csv":
        sys.stdout.write(csv_text)
        return EXIT_OK
    in_range = [p for p in pts if 4 <= p.n <= 32]
    _emit(
        {
            "points": [p.row(args.timing) for p in pts],
            "loglog_slope_4_32": round(loglog_slope(pts), 6) if len(in_range) >= 2 else None,
        },
        args.format,
    )
    return EXIT_OK


def cmd_geodesic(args) -> int:
    from .experiments import geodesic_experiment

    rows = geodesic_experiment(args.max_m, cap=args.cap)
    if args.format == "csv":
        sys.stdout.write("m,distance,half_m,pass\n")
        for r in rows:
            d = "" if r.distance is None else r.distance
            p = "unknown" if r.passed is None else str(r.passed).lower()
            sys.stdout.write(f"{r.m},{d},{r.half_m},{p}\n")
        return EXIT_OK
    _emit({"cap": args.cap, "rows": [r.to_dict() for r in rows]}, args.format)
    return EXIT_OK


def cmd_partition_search(args) -> int:
    from .experiments import partition_search

    try:
        res = partition_search(args.n, args.pieces, args.trials, seed=args.seed, workers=args.workers)
    except ValueError as e:
        raise UsageError(str(e)) from e
    _emit(res.to_dict(), args.format)
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import to_dot, to_svg

    d = _load_diagram(args.diagram)
    rep = validate(d)
    if not rep.ok:
        raise DiagramError("invalid diagram: " + "; ".join(rep.violations[:3]))
    text = to_svg(d) if args.svg else to_dot(d)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    default_fmt = os.environ.get("KAMPEN_FORMAT", "json")
    if default_fmt not in FORMATS:
        raise UsageError(f"KAMPEN_FORMAT must be one of {', '.join(FORMATS)}")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=default_fmt,
                        help="output format (default from KAMPEN_FORMAT, else json)")

    p = _Parser(prog="kampen", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", parents=[common], help="normal form and identity test")
    s.add_argument("word")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("dist", parents=[common], help="exact word-metric distance up to a cap")
    s.add_argument("word")
    s.add_argument("--cap", type=int, default=10)
    s.set_defaults(func=cmd_dist)

    s = sub.add_parser("trapezium", parents=[common], help="trapezium diagram for u_n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_trapezium)

    s = sub.add_parser("fill", parents=[common], help="fill an identity word")
    s.add_argument("--word", required=True)
    s.add_argument("--out")
    s.add_argument("--raw", action="store_true", help="keep the unreduced band stack")
    s.set_defaults(func=cmd_fill)

    s = sub.add_parser("analyze", parents=[common], help="validate a diagram file and report bands, annuli and census")
    s.add_argument("diagram")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("curve", parents=[common], help="area and diameter of trapezia and fillings of u_n")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--min-n", type=int, default=1)
    s.add_argument("--out")
    s.add_argument("--no-fill", action="store_true", help="skip filling u_n by band stacking")
    s.add_argument("--timing", action="store_true", help="add wallclock (makes output non-reproducible)")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_curve)

    s = sub.add_parser("geodesic", parents=[common], help="|k a^m k| against m/2")
    s.add_argument("--max-m", type=int, required=True)
    s.add_argument("--cap", type=int, default=10)
    s.set_defaults(func=cmd_geodesic)

    s = sub.add_parser("partition-search", parents=[common], help="random connected partitions of trapezium(n)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--pieces", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_partition_search)

    s = sub.add_parser("render", help="DOT (default) or SVG picture of a diagram file")
    s.add_argument("diagram")
    s.add_argument("--svg", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"kampen: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, DiagramError) as e:
        nf = getattr(e, "normal_form", None)
        if nf is not None:
            _emit({"error": type(e).__name__, "message": str(e), "normal_form": nf.to_dict()}, "json")
        print(f"kampen: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DOMAIN


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
