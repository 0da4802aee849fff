"""JSON readers and writers.

Rationals are strings such as ``"1/4"`` or ``"-2"``; readers ignore unknown
top-level keys so CLI outputs (which carry a ``config`` header) read back
directly.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .core import (CorrMatrix, DetProtocol, FacetList, LinearInequality, Pattern, Picture, PointList, ProbTable,
                   ProbVector, Scenario)
from .errors import SchemaError
from .polytope import FacetReport, HRepresentation


def rat(x) -> str:
    return str(Fraction(x))


def parse_rat(s) -> Fraction:
    try:
        if isinstance(s, float):
            raise ValueError("floats are not exact")
        return Fraction(s)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise SchemaError(f"bad rational {s!r}: {e}") from None


def _need(d: dict, key: str):
    try:
        return d[key]
    except (KeyError, TypeError):
        raise SchemaError(f"missing key {key!r}") from None


def scenario_to_json(s: Scenario | None):
    return None if s is None else s.to_json()


def scenario_from_json(d) -> Scenario | None:
    if d is None:
        return None
    try:
        return Scenario.from_json(d)
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"bad scenario: {e}") from None


def table_to_json(t: ProbTable) -> dict:
    s = t.scenario
    return {
        "scenario": s.to_json(),
        "p": {f"{i},{j}": [[rat(x) for x in row] for row in t.p[i][j]] for i, j in s.contexts()},
    }


def table_from_json(d: dict) -> ProbTable:
    s = scenario_from_json(_need(d, "scenario"))
    p = _need(d, "p")
    vals = {}
    for i, j in s.contexts():
        rows = p.get(f"{i},{j}")
        if rows is None or len(rows) != s.K or any(len(r) != s.K for r in rows):
            raise SchemaError(f"context {i},{j} missing or not {s.K}x{s.K}")
        vals[i, j] = [[parse_rat(x) for x in r] for r in rows]
    return ProbTable.from_function(s, lambda a, b, i, j: vals[i, j][a][b])


def vector_to_json(v: ProbVector) -> dict:
    return {"scenario": v.scenario.to_json(), "coords": [rat(x) for x in v.coords]}


def vector_from_json(d: dict) -> ProbVector:
    return ProbVector(scenario_from_json(_need(d, "scenario")), tuple(parse_rat(x) for x in _need(d, "coords")))


def corr_to_json(c: CorrMatrix) -> dict:
    return {"scenario": c.scenario.to_json(), "c": [[rat(x) for x in row] for row in c.c]}


def corr_from_json(d: dict) -> CorrMatrix:
    s = scenario_from_json(_need(d, "scenario"))
    rows = _need(d, "c")
    return CorrMatrix.from_coords(s, [parse_rat(x) for row in rows for x in row])


def protocol_to_json(p: DetProtocol) -> dict:
    d = {"scenario": p.scenario.to_json(), "pattern": p.pattern.value,
         "alpha": _lists(p.alpha), "beta": _lists(p.beta)}
    if p.msg:
        d["msg"] = list(p.msg)
    return d


def protocol_from_json(d: dict) -> DetProtocol:
    return DetProtocol(scenario_from_json(_need(d, "scenario")), Pattern(_need(d, "pattern")),
                       _tuples(_need(d, "alpha")), _tuples(_need(d, "beta")), tuple(d.get("msg", ())))


def _lists(x):
    return [_lists(v) for v in x] if isinstance(x, tuple) else x


def _tuples(x):
    return tuple(_tuples(v) for v in x) if isinstance(x, list) else x


def inequality_to_json(q: LinearInequality) -> dict:
    return {"picture": q.picture.value, "coeffs": [rat(x) for x in q.coeffs], "bound": rat(q.bound)}


def inequality_from_json(d: dict) -> LinearInequality:
    try:
        picture = Picture(_need(d, "picture"))
    except ValueError as e:
        raise SchemaError(str(e)) from None
    return LinearInequality(picture, [parse_rat(x) for x in _need(d, "coeffs")], parse_rat(_need(d, "bound")))


def points_to_json(pl: PointList) -> dict:
    return {"picture": pl.picture.value, "scenario": scenario_to_json(pl.scenario),
            "points": [[rat(x) for x in p] for p in pl.points]}


def points_from_json(d: dict) -> PointList:
    try:
        picture = Picture(_need(d, "picture"))
    except ValueError as e:
        raise SchemaError(str(e)) from None
    pts = tuple(tuple(parse_rat(x) for x in p) for p in _need(d, "points"))
    if len({len(p) for p in pts}) > 1:
        raise SchemaError("points have different lengths")
    return PointList(picture, scenario_from_json(d.get("scenario")), pts)


def hrep_to_json(h: HRepresentation) -> dict:
    return {"picture": h.picture.value, "scenario": scenario_to_json(h.scenario),
            "facets": [inequality_to_json(q) for q in h.facets],
            "equations": [inequality_to_json(q) for q in h.equations]}


def hrep_from_json(d: dict) -> HRepresentation:
    try:
        picture = Picture(_need(d, "picture"))
    except ValueError as e:
        raise SchemaError(str(e)) from None
    facets = tuple(inequality_from_json(q) for q in _need(d, "facets"))
    eqs = tuple(inequality_from_json(q) for q in d.get("equations", ()))
    return HRepresentation(FacetList(picture, facets), eqs, scenario_from_json(d.get("scenario")))


def facet_report_to_json(r: FacetReport) -> dict:
    return {"facet": inequality_to_json(r.inequality), "valid": r.valid, "tightRank": r.tight_rank,
            "dim": r.polytope_dim, "isFacet": r.is_facet}


def detect(d: dict) -> str:
    """Kind of object a JSON document holds."""
    if not isinstance(d, dict):
        raise SchemaError("top-level JSON value must be an object")
    if "points" in d:
        return "points"
    if "facets" in d:
        return "hrep"
    if "p" in d:
        return "table"
    if "c" in d:
        return "corr"
    if "coords" in d and "scenario" in d:
        return "vector"
    raise SchemaError("unrecognised document")


def load(path: str) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(f"{path}: {e}") from None


def dumps(obj: Any, indent: int = 0) -> str:
    """Pretty JSON with lists of scalars kept on one line."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(json.dumps(v) for v in obj) + "]"
        if all(isinstance(v, (list, tuple)) and all(not isinstance(w, (dict, list, tuple)) for w in v)
               for v in obj) and len(obj) <= 4:
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent + 1) for v in obj) + "\n" + pad + "]"
    return json.dumps(obj)
