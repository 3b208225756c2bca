"""Command-line front end with JSON input/output.

Subcommands::

    wmvt wdet    --funcs "1" "x" "x^2/2" --nodes 0.3,0.3,0.3 [--anchors JSON]
    wmvt divdiff --f "x^3" --points 0,0.5,1 --method both
    wmvt mvt     problem.json --mode cauchy [--grid N] [--tol T]
    wmvt verify  --suite divdiff_equiv --seed 7 --cases 500

All results are a single JSON document on stdout; diagnostics (including
suite wall times) go to stderr.  Numbers are serialized with 17
significant digits, so values round-trip exactly and identical
invocations produce byte-identical stdout.  The ``WMVT_GRID`` environment
variable overrides the default scan grid density (1024).

Exit codes: 0 success (for ``mvt``: residual within tolerance; for
``verify``: no failures), 2 parse/validation error, 3 domain or
conditioning error, 4 no root found, 5 regularity or hypothesis failure.

Problem files are JSON objects validated against ``PROBLEM_SCHEMA``.
Fields (per mode, unused fields ignored):

    m, k        integers (theorem1)
    funcs       array of expression strings (theorem1, theorem2)
    anchors     array of m-vectors, one per function (theorem1, m > 0)
    f, g        expression strings
    p, q        m-vectors (theorem1, m > 0)
    nodes       array of scalars (theorem1, theorem2, ratz-russel)
    interval    [a, b] (cauchy; taylor uses [a, x]; theorem2)
    exterior    array of scalars outside [a, b] (theorem2)

Node systems appearing in output are serialized as
``{"distinct": [...], "mults": [...]}``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import jsonschema

from . import verify as verify_mod
from .determinant import AnchoredSystem, build_matrix, lu_det
from .divdiff import divdiff_det, divdiff_recursive
from .errors import (ConditioningError, DimensionError, EvalDomainError,
                     ExprSyntaxError, HypothesisError, NoRootError,
                     RegularityError)
from .expr import parse
from .mvt import (MvtCertificate, MvtProblem, cauchy_mvt,
                  exterior_anchor_problem, find_intermediate_point,
                  ratz_russel_mvt, taylor_mvt)
from .nodes import normalize_nodes

__all__ = ["main", "PROBLEM_SCHEMA", "dumps"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DOMAIN = 3
EXIT_NO_ROOT = 4
EXIT_REGULARITY = 5

_NUMBER = {"type": "number"}
_VECTOR = {"type": "array", "items": _NUMBER}

PROBLEM_SCHEMA = {
    "type": "object",
    "properties": {
        "m": {"type": "integer", "minimum": 0},
        "k": {"type": "integer", "minimum": 1},
        "funcs": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "anchors": {"type": "array", "items": _VECTOR},
        "f": {"type": "string"},
        "g": {"type": "string"},
        "p": _VECTOR,
        "q": _VECTOR,
        "nodes": {"type": "array", "items": _NUMBER, "minItems": 2},
        "interval": {"type": "array", "items": _NUMBER,
                     "minItems": 2, "maxItems": 2},
        "exterior": {"type": "array", "items": _NUMBER, "minItems": 1},
    },
    "additionalProperties": False,
}


# -- deterministic JSON -------------------------------------------------------

def _format_float(x: float) -> str:
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return "null"
    text = format(float(x), ".17g")
    if "e" not in text and "E" not in text and "." not in text:
        text += ".0"
    return text


def dumps(obj) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, dict):
        inner = ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj) -> None:
    sys.stdout.write(dumps(obj) + "\n")


# -- argument helpers ---------------------------------------------------------

def _split_many(values: Sequence[str]) -> list[str]:
    out: list[str] = []
    for v in values:
        out.extend(part.strip() for part in v.split(",") if part.strip())
    return out


def _parse_floats(values: Sequence[str]) -> tuple[float, ...]:
    return tuple(float(v) for v in _split_many(values))


def _parse_exprs(values: Sequence[str]) -> tuple:
    return tuple(parse(v) for v in values)


def _certificate_payload(cert: MvtCertificate, extras: dict | None = None) -> dict:
    out = cert.to_json_dict()
    if extras:
        out.update(extras)
    return out


# -- subcommands --------------------------------------------------------------

def _cmd_wdet(args) -> int:
    funcs = _parse_exprs(_split_many(args.funcs))
    points = _parse_floats(args.nodes)
    ns = normalize_nodes(points)
    if args.anchors:
        anchors = tuple(tuple(float(c) for c in row)
                        for row in json.loads(args.anchors))
        if not anchors or not anchors[0]:
            raise ValueError("anchors must be a nonempty array of nonempty vectors")
        m = len(anchors[0])
    else:
        anchors = ((),) * len(funcs)
        m = 0
    if len(anchors) != len(funcs):
        raise DimensionError(
            f"{len(funcs)} functions but {len(anchors)} anchor vectors")
    if len(funcs) != m + ns.total:
        raise DimensionError(
            f"{len(funcs)} rows vs {m + ns.total} columns: matrix not square")
    res = lu_det(build_matrix(funcs, anchors, m, ns))
    _emit({"value": res.value, "condition_estimate": res.condition_estimate,
           "matrix_dim": res.matrix_dim, "singular": res.singular})
    return EXIT_OK


def _cmd_divdiff(args) -> int:
    f = parse(args.f)
    points = _parse_floats(args.points)
    ns = normalize_nodes(points)
    nodes_json = {"distinct": list(ns.distinct), "mults": list(ns.mults)}
    if args.method == "det":
        dd = divdiff_det(f, points)
        _emit({"value": dd.value, "method": "determinant_ratio",
               "order": dd.order, "nodes": nodes_json})
    elif args.method == "rec":
        dd = divdiff_recursive(f, points)
        _emit({"value": dd.value, "method": "recursive",
               "order": dd.order, "nodes": nodes_json})
    else:
        d1 = divdiff_det(f, points)
        d2 = divdiff_recursive(f, points)
        _emit({"det": d1.value, "rec": d2.value, "gap": abs(d1.value - d2.value),
               "method": "both", "order": d1.order, "nodes": nodes_json})
    return EXIT_OK


def _load_problem(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    jsonschema.validate(doc, PROBLEM_SCHEMA)
    return doc


def _require(doc: dict, mode: str, *fields: str) -> None:
    missing = [name for name in fields if name not in doc]
    if missing:
        raise ValueError(f"mode {mode!r} requires fields: {', '.join(missing)}")


def _cmd_mvt(args) -> int:
    doc = _load_problem(args.problem)
    options = {"tol": args.tol}
    if args.grid is not None:
        options["grid"] = args.grid
    extras: dict = {}
    if args.mode == "cauchy":
        _require(doc, args.mode, "f", "g", "interval")
        a, b = doc["interval"]
        cert = cauchy_mvt(parse(doc["f"]), parse(doc["g"]), a, b, **options)
    elif args.mode == "taylor":
        _require(doc, args.mode, "f", "k", "interval")
        a, x = doc["interval"]
        res = taylor_mvt(parse(doc["f"]), a, x, doc["k"], **options)
        cert = res.certificate
        extras = {"polynomial_value": res.polynomial_value,
                  "remainder": res.remainder,
                  "remainder_at_xi": res.remainder_at_xi}
    elif args.mode == "ratz-russel":
        _require(doc, args.mode, "f", "g", "nodes")
        res = ratz_russel_mvt(parse(doc["f"]), parse(doc["g"]),
                              doc["nodes"], **options)
        cert = res.certificate
        extras = {"dd_f": res.dd_f.value, "dd_g": res.dd_g.value}
    elif args.mode == "theorem2":
        _require(doc, args.mode, "funcs", "f", "g", "exterior", "nodes", "interval")
        prob = exterior_anchor_problem(
            _parse_exprs(doc["funcs"]), parse(doc["f"]), parse(doc["g"]),
            doc["exterior"], doc["nodes"], tuple(doc["interval"]))
        cert = find_intermediate_point(prob, **options)
    else:  # theorem1
        _require(doc, args.mode, "m", "k", "funcs", "f", "g", "nodes")
        m, k = doc["m"], doc["k"]
        nodes = doc["nodes"]
        interval = tuple(doc.get("interval", (min(nodes), max(nodes))))
        anchors = tuple(tuple(row) for row in doc.get("anchors", ()))
        sys_ = AnchoredSystem(m, k, _parse_exprs(doc["funcs"]), anchors, interval)
        prob = MvtProblem(sys_, parse(doc["f"]), parse(doc["g"]),
                          tuple(doc.get("p", ())), tuple(doc.get("q", ())),
                          tuple(nodes))
        cert = find_intermediate_point(prob, **options)
    _emit(_certificate_payload(cert, extras))
    return EXIT_OK if cert.residual <= args.tol else EXIT_NO_ROOT


def _cmd_verify(args) -> int:
    report = verify_mod.run_suite(args.suite, seed=args.seed, cases=args.cases)
    _emit(report.to_json_dict())
    print(f"suite {report.suite}: {report.cases} cases, "
          f"{len(report.failures)} failures, {report.discarded} discarded, "
          f"{report.wall_time_s:.3f}s", file=sys.stderr)
    return EXIT_OK if report.passed else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wmvt",
        description="anchored functional determinants, divided differences, "
                    "and certified intermediate points")
    sub = parser.add_subparsers(dest="command", required=True)

    p_wdet = sub.add_parser("wdet", help="evaluate an anchored determinant")
    p_wdet.add_argument("--funcs", nargs="+", required=True,
                        help="expression strings (repeat or comma-separate)")
    p_wdet.add_argument("--nodes", nargs="+", required=True,
                        help="node scalars (repeat or comma-separate)")
    p_wdet.add_argument("--anchors", help="JSON array of anchor vectors")
    p_wdet.set_defaults(func=_cmd_wdet)

    p_dd = sub.add_parser("divdiff", help="divided difference of f at points")
    p_dd.add_argument("--f", required=True, help="expression string")
    p_dd.add_argument("--points", nargs="+", required=True)
    p_dd.add_argument("--method", choices=("det", "rec", "both"), default="both")
    p_dd.set_defaults(func=_cmd_divdiff)

    p_mvt = sub.add_parser("mvt", help="locate a certified intermediate point")
    p_mvt.add_argument("problem", help="path to a problem JSON file")
    p_mvt.add_argument("--mode", default="theorem1",
                       choices=("theorem1", "theorem2", "cauchy", "taylor",
                                "ratz-russel"))
    p_mvt.add_argument("--grid", type=int, default=None,
                       help="scan grid density (default 1024 or WMVT_GRID)")
    p_mvt.add_argument("--tol", type=float, default=1e-9,
                       help="certificate residual tolerance")
    p_mvt.set_defaults(func=_cmd_mvt)

    p_ver = sub.add_parser("verify", help="run a named verification suite")
    p_ver.add_argument("--suite", required=True, choices=verify_mod.SUITE_NAMES)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--cases", type=int, default=100)
    p_ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ExprSyntaxError, DimensionError, jsonschema.ValidationError,
            json.JSONDecodeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (EvalDomainError, ConditioningError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NoRootError as exc:
        print(f"no root found: {exc}", file=sys.stderr)
        return EXIT_NO_ROOT
    except RegularityError as exc:
        print(f"regularity failure: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(dumps(exc.report.to_json_dict()), file=sys.stderr)
        return EXIT_REGULARITY
    except HypothesisError as exc:
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        return EXIT_REGULARITY


if __name__ == "__main__":
    raise SystemExit(main())
