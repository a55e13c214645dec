"""Command-line front end; every run prints exactly one JSON document.

Exit codes: 0 success, 1 domain error, 2 parse or schema error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import bounds as bounds_mod
from .chabauty import (
    HyperellipticCurve,
    ResidueDisc,
    check_point,
    coleman_bound_for_curve,
    count_points_Fp,
    tiny_integral,
)
from .chipfiring import FiniteGraph, RankComputer, as_divisor, canonical
from .errors import DomainError, HypothesisFailure, SchemaError
from .fixtures import write_fixtures
from .metric_graph import (
    GraphDivisor,
    PLFunction,
    VertexWeightedMetricGraph,
    canonical_divisor,
    is_canonical_section,
    slope_bound,
)
from .padic import INF, PadicNumber
from .series import PadicSeries, ValuationWindow, antiderivative, compute_Np, count_zeros, parse_series
from .trop_jacobian import abel_jacobi, is_principal, period_lattice


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError(f"usage error: {message}")


def _rat(x) -> str:
    return str(Fraction(x))


def _ext(x) -> str:
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return _rat(x)


def _load(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc.msg}") from exc


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise SchemaError(f"expected an integer, got {text!r}") from exc


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"expected an exact rational, got {text!r}") from exc


def padic_json(x: PadicNumber) -> dict:
    return {
        "value": _rat(x.reduced()),
        "valuation": _ext(x.valuation if not x.is_zero() else INF),
        "absolute_precision": x.absolute_precision,
        "prime": x.prime,
    }


def series_json(f: PadicSeries) -> dict:
    return {
        "prime": f.prime,
        "low": f.low,
        "coeffs": [_rat(c.value()) for c in f.coeffs],
        "tail_valuation_floor": _ext(f.tail_valuation_floor),
        "tail_slope": _rat(f.tail_slope),
    }


# ---------------------------------------------------------------------------
# handlers


def _bounds_eval(a) -> dict:
    req = bounds_mod.BoundRequest.from_json(_load(a.request))
    return {"kind": req.kind, **bounds_mod.evaluate(req).to_json()}


def _np(a) -> dict:
    return {"Np": compute_Np(_int(a.p), _fraction(a.r), _int(a.N0))}


def _curve(path: str) -> HyperellipticCurve:
    return HyperellipticCurve.from_json(_load(path))


def _curve_count(a) -> dict:
    return {"points_Fp": count_points_Fp(_curve(a.curve), _int(a.p))}


def _curve_coleman(a) -> dict:
    res = coleman_bound_for_curve(_curve(a.curve), _int(a.p), _int(a.r))
    return {"bound": res.bound, "points_Fp": res.points_Fp}


def _curve_check_point(a) -> dict:
    point = [a.x] if a.y is None else [a.x, a.y]
    return {"point": point, "on_curve": check_point(_curve(a.curve), point)}


def _curve_tiny_int(a) -> dict:
    curve = _curve(a.curve)
    p = _int(a.p)
    disc = ResidueDisc.parse(curve, p, a.disc)
    t1 = PadicNumber.from_rational(_fraction(a.t1), p)
    t2 = PadicNumber.from_rational(_fraction(a.t2), p)
    val = tiny_integral(disc, _int(a.i), t1, t2, a.terms)
    return {"integral": padic_json(val), "terms": a.terms}


def _graph(path: str) -> VertexWeightedMetricGraph:
    return VertexWeightedMetricGraph.from_json(_load(path))


def _graph_canonical(a) -> dict:
    G = _graph(a.graph)
    K = canonical_divisor(G)
    return {"divisor": K.to_json(), "degree": K.degree, "genus": G.genus}


def _graph_genus(a) -> dict:
    G = _graph(a.graph)
    return {"genus": G.genus, "first_betti": G.first_betti}


def _graph_slope_check(a) -> dict:
    G = _graph(a.graph)
    F = PLFunction.from_json(G, _load(a.pl))
    check = is_canonical_section(F, G)
    return {
        "canonical_section": check.ok,
        "witness": None if check.witness is None else str(check.witness),
        "max_abs_slope": F.max_abs_slope(),
        "bound": slope_bound(G),
        "holds": F.max_abs_slope() <= slope_bound(G),
        "divisor": F.divisor().to_json(),
    }


def _graph_jacobian(a) -> dict:
    L = period_lattice(_graph(a.graph))
    return {**L.to_json(), "positive_definite": L.is_positive_definite()}


def _graph_aj(a) -> dict:
    G = _graph(a.graph)
    tp = abel_jacobi(G, G.point(a.basepoint), G.point(a.point))
    return {"coordinates": [_rat(x) for x in tp.coordinates], "gram": tp.lattice.to_json()["gram"]}


def _graph_principal(a) -> dict:
    G = _graph(a.graph)
    D = GraphDivisor.from_json(G, _load(a.divisor))
    return {"principal": is_principal(G, D)}


def _fgraph(path: str) -> FiniteGraph:
    return FiniteGraph.from_json(_load(path))


def _divisor(G: FiniteGraph, path: str) -> dict:
    obj = _load(path)
    if not isinstance(obj, dict):
        raise SchemaError("divisor must be an object")
    return as_divisor(G, obj)


def _chip_rank(a) -> dict:
    G = _fgraph(a.fgraph)
    D = _divisor(G, a.divisor)
    return {"rank": RankComputer(G).rank(D)}


def _chip_rr(a) -> dict:
    G = _fgraph(a.fgraph)
    D = _divisor(G, a.divisor)
    rc = RankComputer(G)
    K = canonical(G)
    r = rc.rank(D)
    r_dual = rc.rank({v: K[v] - D[v] for v in G.vertices})
    deg = sum(D.values())
    return {
        "rank": r,
        "dual_rank": r_dual,
        "degree": deg,
        "genus": G.genus,
        "holds": r - r_dual == deg - G.genus + 1,
    }


def _series(path: str) -> PadicSeries:
    obj = _load(path)
    if not isinstance(obj, dict):
        raise SchemaError("series literal must be an object")
    return parse_series(obj)


def _series_zeros(a) -> dict:
    w = ValuationWindow.parse(a.window)
    return {"zeros": count_zeros(_series(a.series), w), "window": str(w)}


def _series_antider(a) -> dict:
    return {"antiderivative": series_json(antiderivative(_series(a.series)))}


def _dagger(a) -> dict:
    G = _graph(a.graph)
    return {"genus": G.genus, "dagger": bounds_mod.check_dagger(G)}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tropchab", description=__doc__)
    p.add_argument("--fixtures", metavar="DIR", help="write the example fixture files to DIR")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    b = sub.add_parser("bounds").add_subparsers(dest="sub", parser_class=_Parser, required=True)
    x = b.add_parser("eval")
    x.add_argument("request")
    x.set_defaults(func=_bounds_eval)

    x = sub.add_parser("np")
    x.add_argument("p")
    x.add_argument("r")
    x.add_argument("N0")
    x.set_defaults(func=_np)

    c = sub.add_parser("curve").add_subparsers(dest="sub", parser_class=_Parser, required=True)
    x = c.add_parser("count")
    x.add_argument("curve")
    x.add_argument("p")
    x.set_defaults(func=_curve_count)
    x = c.add_parser("coleman")
    x.add_argument("curve")
    x.add_argument("p")
    x.add_argument("r")
    x.set_defaults(func=_curve_coleman)
    x = c.add_parser("check-point")
    x.add_argument("curve")
    x.add_argument("x")
    x.add_argument("y", nargs="?")
    x.set_defaults(func=_curve_check_point)
    x = c.add_parser("tiny-int")
    for name in ("curve", "p", "disc", "i", "t1", "t2"):
        x.add_argument(name)
    x.add_argument("--terms", type=int, default=20)
    x.set_defaults(func=_curve_tiny_int)

    g = sub.add_parser("graph").add_subparsers(dest="sub", parser_class=_Parser, required=True)
    for name, func, extra in (
        ("canonical", _graph_canonical, ()),
        ("genus", _graph_genus, ()),
        ("slope-check", _graph_slope_check, ("pl",)),
        ("jacobian", _graph_jacobian, ()),
        ("aj", _graph_aj, ("basepoint", "point")),
        ("principal", _graph_principal, ("divisor",)),
    ):
        x = g.add_parser(name)
        x.add_argument("graph")
        for e in extra:
            x.add_argument(e)
        x.set_defaults(func=func)

    ch = sub.add_parser("chip").add_subparsers(dest="sub", parser_class=_Parser, required=True)
    for name, func in (("rank", _chip_rank), ("rr", _chip_rr)):
        x = ch.add_parser(name)
        x.add_argument("fgraph")
        x.add_argument("divisor")
        x.set_defaults(func=func)

    s = sub.add_parser("series").add_subparsers(dest="sub", parser_class=_Parser, required=True)
    x = s.add_parser("zeros")
    x.add_argument("series")
    x.add_argument("window")
    x.set_defaults(func=_series_zeros)
    x = s.add_parser("antider")
    x.add_argument("series")
    x.set_defaults(func=_series_antider)

    x = sub.add_parser("dagger")
    x.add_argument("graph")
    x.set_defaults(func=_dagger)
    return p


def _error_doc(exc: Exception) -> dict:
    doc = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, HypothesisFailure):
        doc["hypothesis"] = exc.hypothesis
    return doc


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.fixtures:
            doc: dict = {"fixtures": write_fixtures(args.fixtures)}
        elif getattr(args, "func", None) is None:
            raise SchemaError("no subcommand given")
        else:
            doc = args.func(args)
        code = 0
    except SchemaError as exc:
        doc, code = _error_doc(exc), 2
    except DomainError as exc:
        doc, code = _error_doc(exc), 1
    json.dump(doc, out, sort_keys=True)
    out.write("\n")
    return code


def main() -> None:
    sys.exit(run())
