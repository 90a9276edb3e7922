"""Command-line entry point.

Exit codes: 0 success, 1 usage, 2 parse/schema, 3 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .curvecount import (
    ModuliError,
    ModuliSet,
    WallEvent,
    apply_wall_event,
    assemble,
    conifold_substitute,
    partition_function,
    reduced_invariant,
)
from .diagram import DiagramError, ParseError, parse_diagram
from .laurent import QSeries
from .skein import SkeinEvaluator, collapse_s3_factor

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INVARIANT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _fail(code: int, msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# homfly
# ---------------------------------------------------------------------------

def cmd_homfly(args) -> int:
    try:
        d = parse_diagram(_read_text(args.diagram))
    except ParseError as exc:
        return _fail(EXIT_PARSE, str(exc))
    except DiagramError as exc:
        return _fail(EXIT_PARSE, f"invalid diagram: {exc}")
    if d.ambient != "S3":
        return _fail(EXIT_USAGE, "homfly needs a diagram in S3, not an annular closure")
    ev = SkeinEvaluator(framing_sign=args.framing_sign)
    framed = ev.evaluate(d)
    zero = ev.zero_framed(d)
    if args.json:
        print(json.dumps({"diagram": d.render(), "framed": framed.render(), "zero_framed": zero.render(),
                          "framing": list(d.framing()), "framing_sign": args.framing_sign}, indent=2))
    elif args.zero_framed:
        print(zero.render())
    else:
        print(framed.render())
        if zero != framed:
            print(f"0-framed: {zero.render()}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# count
# ---------------------------------------------------------------------------

def _load_json(path: str):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ModuliError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _collapse_series(s: QSeries, ev) -> QSeries:
    coeffs = {k: collapse_s3_factor(c, ev) for k, c in s.coeffs.items()}
    return QSeries(coeffs, s.order, collapse_s3_factor(s.one, ev), s.nvars)


def cmd_count(args) -> int:
    try:
        m = ModuliSet.from_json(_load_json(args.moduli))
        events = []
        for path in args.wall or []:
            data = _load_json(path)
            events.extend(WallEvent.from_json(e) for e in (data if isinstance(data, list) else [data]))
        closed = ModuliSet.from_json(_load_json(args.reduce_by)) if args.reduce_by else None
    except ModuliError as exc:
        return _fail(EXIT_PARSE, f"schema: {exc}")
    except OSError as exc:
        return _fail(EXIT_USAGE, str(exc))
    s = args.framing_sign
    try:
        for e in events:
            m = apply_wall_event(m, e, s)
    except ModuliError as exc:
        return _fail(EXIT_INVARIANT, f"wall event: {exc}")
    ev = SkeinEvaluator(framing_sign=s)
    series_mode = args.partition or args.conifold or closed is not None
    try:
        if not series_mode:
            out = assemble(m, args.cls, s)
            if args.collapse_s3:
                out = collapse_s3_factor(out, ev)
            text = out.render()
        else:
            series = partition_function(m, args.order, s)
            if closed is not None:
                if closed.branes != m.branes:
                    return _fail(EXIT_PARSE, "schema: --reduce-by moduli use a different brane list")
                series = reduced_invariant(series, partition_function(closed, series.order, s))
            if args.collapse_s3 or args.conifold:
                series = _collapse_series(series, ev)
            if args.conifold:
                text = conifold_substitute(series).render()
            else:
                text = series.render()
    except ModuliError as exc:
        return _fail(EXIT_INVARIANT, str(exc))
    except ZeroDivisionError as exc:
        return _fail(EXIT_INVARIANT, str(exc))
    if args.json:
        print(json.dumps({"result": text, "moduli": m.to_json()}, indent=2))
    else:
        print(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# localmodel
# ---------------------------------------------------------------------------

def _branch(x: str) -> int:
    if x in ("+", "+1", "1"):
        return 1
    if x in ("-", "-1"):
        return -1
    raise argparse.ArgumentTypeError("branch must be + or -")


def cmd_localmodel(args) -> int:
    from . import geometry as g

    fam = args.family
    key = {"through-gamma": "t", "hyperbolic-pair": "t", "elliptic-cylinder": "t",
           "tangency": "s", "hyperbolic-nodal": "rho", "elliptic-nodal": "rho"}[fam]
    values = getattr(args, key) or []
    if not values:
        return _fail(EXIT_USAGE, f"{fam} needs --{key}")
    reports = []
    try:
        for v in values:
            params = {key: v}
            if fam == "tangency":
                params["branch"] = args.branch
            reports.append(g.report(g.make_family(fam, **params)))
    except (g.NonTransverseError, g.DegenerateError) as exc:
        return _fail(EXIT_INVARIANT, str(exc))
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    ok = True
    notes = []
    if args.check:
        if fam == "through-gamma":
            links = {r["linking"] for r in reports}
            ok = len(links) == 1
            notes.append(f"linking values {sorted(links)}")
        elif fam == "tangency":
            for v in values:
                bal = g.framing_balance(args.branch, abs(v)) if v != 0 else False
                ok = ok and bal
                notes.append(f"framing balance at s0={abs(v)}: {bal}")
        elif fam == "elliptic-cylinder":
            signs = {math.copysign(1, v): r["total"] for v, r in zip(values, reports)}
            if len(signs) == 2:
                ok = signs[1.0] == -signs[-1.0] != 0
                notes.append(f"chain totals {signs}")
        elif fam == "elliptic-nodal":
            for r in reports:
                want = math.sqrt(2) * math.exp(-r["params"]["rho"])
                good = abs(r["radius"] - want) <= 1e-12
                ok = ok and good and r["total"] == 0
                notes.append(f"rho={r['params']['rho']}: radius {r['radius']:.15g} vs sqrt(2)e^-rho {want:.15g}")
        elif fam == "hyperbolic-nodal":
            for r in reports:
                ok = ok and r["sup_distance"] <= math.exp(1 - 2 * r["params"]["rho"]) * (1 + 1e-9)
        ok = ok and all(pt["sign"] in (1, -1) for r in reports for pt in r["points"])
        ok = ok and all(r["residual_max"] < 1e-9 for r in reports)
    out = reports[0] if len(reports) == 1 else {"reports": reports}
    if args.check:
        out = dict(out)
        out["check"] = {"passed": ok, "notes": notes}
    print(json.dumps(out, indent=2))
    return EXIT_OK if ok else EXIT_INVARIANT


# ---------------------------------------------------------------------------
# index
# ---------------------------------------------------------------------------

def cmd_index(args) -> int:
    from .index import InconclusiveError, WallError, WeightPair, dbar_index, dbar_index_numeric

    try:
        w = WeightPair(args.weights[0], args.weights[1], args.type)
    except WallError as exc:
        return _fail(EXIT_USAGE, str(exc))
    analytic = dbar_index(w)
    result = {"d_minus": w.d_minus, "d_plus": w.d_plus, "type": w.boundary, "unit": w.unit, "index": analytic}
    code = EXIT_OK
    if args.numeric:
        try:
            num = dbar_index_numeric(w, args.modes, args.length, args.grid)
        except InconclusiveError as exc:
            return _fail(EXIT_INVARIANT, f"numeric index inconclusive: {exc}")
        result["numeric"] = num
        if num != analytic:
            code = EXIT_INVARIANT
    if args.json:
        print(json.dumps(result))
    else:
        line = f"index = {analytic} ({w.unit})"
        if args.numeric:
            line += f", numeric = {result['numeric']}"
        print(line)
    return code


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="skeincount", description="Skein-valued curve counts and local models.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    h = sub.add_parser("homfly", help="framed HOMFLYPT value of a diagram")
    h.add_argument("diagram", help="PD[...], BR[n,[...]], JSON, a file path, @file, or - for stdin")
    h.add_argument("--zero-framed", action="store_true", help="print only the 0-framed normalization")
    h.add_argument("--json", action="store_true")
    h.add_argument("--framing-sign", type=int, choices=(1, -1), default=1,
                   help="a-power picked up by a +1 framing change (default +1)")
    h.set_defaults(func=cmd_homfly)

    c = sub.add_parser("count", help="assemble a skein-valued count from moduli JSON")
    c.add_argument("moduli")
    c.add_argument("--collapse-s3", action="store_true", help="evaluate S3 factors to HOMFLYPT values")
    c.add_argument("--partition", action="store_true", help="print 1 + sum_d assemble(d) Q^d")
    c.add_argument("--conifold", action="store_true", help="collapse, then substitute Q = a^2")
    c.add_argument("--reduce-by", metavar="CLOSED_JSON", help="divide by the closed partition function")
    c.add_argument("--wall", action="append", metavar="EVENT_JSON", help="apply a wall event first (repeatable)")
    c.add_argument("--class", dest="cls", type=lambda x: tuple(int(t) for t in x.split(",")),
                   help="restrict to one degree class, e.g. 1 or 1,0")
    c.add_argument("--order", type=int, default=None, help="series truncation order")
    c.add_argument("--json", action="store_true")
    c.add_argument("--framing-sign", type=int, choices=(1, -1), default=1)
    c.set_defaults(func=cmd_count)

    lm = sub.add_parser("localmodel", help="intersection report for a local model family")
    lm.add_argument("family", choices=["through-gamma", "tangency", "hyperbolic-pair", "hyperbolic-nodal",
                                       "elliptic-cylinder", "elliptic-nodal"])
    lm.add_argument("--t", type=float, action="append")
    lm.add_argument("--s", type=float, action="append")
    lm.add_argument("--rho", type=float, action="append")
    lm.add_argument("--branch", type=_branch, default=1)
    lm.add_argument("--check", action="store_true", help="verify the family's invariant; exit 3 if it fails")
    lm.set_defaults(func=cmd_localmodel)

    ix = sub.add_parser("index", help="weighted dbar index")
    ix.add_argument("--weights", type=float, nargs=2, required=True, metavar=("D_MINUS", "D_PLUS"))
    ix.add_argument("--type", choices=("cylinder", "strip"), default="cylinder")
    ix.add_argument("--numeric", action="store_true", help="also run the discretized spectral count")
    ix.add_argument("--modes", type=int, default=None)
    ix.add_argument("--length", type=float, default=10.0)
    ix.add_argument("--grid", type=int, default=2000)
    ix.add_argument("--json", action="store_true")
    ix.set_defaults(func=cmd_index)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
