"""Command-line entry point: ``bellcomm <subcommand> ...``.

Every JSON output starts with a ``config`` block echoing the resolved
arguments.  Exit status is 0 on success, 1 on domain errors (one line
``error: <code>: <message>`` on stderr) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import sys

from . import catalog as cat
from . import schema
from .core import Direction, Picture, Scenario, one_way_no_signaling, table_to_vector, to_correlation
from .errors import BellCommError, SchemaError
from .ncpoly import quantum_safety_check
from .polytope import (HRepresentation, affine_dimension, convex_certificate, dd_convert, membership,
                       verify_facet)
from .protocols import DEFAULT_CAP, vertex_set
from .quantum import stress_test
from .simulator import simulate


class UsageError(Exception):
    pass


def _scenario_args(p):
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--K", type=int, default=2)
    p.add_argument("--r", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bellcomm", description="Bell polytopes with auxiliary communication")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--out", help="write output here instead of stdout")
        return p

    p = add("vertices", "extreme points of the deterministic protocols")
    _scenario_args(p)
    p.add_argument("--picture", choices=[x.value for x in Picture], default="probability")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    p = add("facets", "convert between vertex and facet representations")
    p.add_argument("--in", dest="input", required=True)

    p = add("verify", "check that inequalities are facets of a vertex set")
    p.add_argument("--vertices", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--facets")
    g.add_argument("--catalog", choices=sorted(cat.CATALOGS))

    p = add("check", "membership and catalog violation of a table or correlation matrix")
    p.add_argument("--in", dest="input", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--facets")
    g.add_argument("--catalog", choices=sorted(cat.CATALOGS))
    p.add_argument("--vertices", help="also search for convex weights over these vertices")

    p = add("catalog", "export named inequality catalogs")
    p.add_argument("--name", choices=sorted(cat.CATALOGS))
    p.add_argument("--family", choices=sorted(cat.FAMILY_NAMES))

    p = add("classify", "match a facet list against a catalog")
    p.add_argument("--facets", required=True)
    p.add_argument("--catalog", choices=sorted(cat.CATALOGS), required=True)
    p.add_argument("--vertices", help="match by tight vertex sets instead of canonical form")

    p = add("bound", "coefficient-sum operator norm bound")
    p.add_argument("--matrix", required=True, help="M1, M2 or a JSON file holding a 3x3 matrix")
    p.add_argument("--k", type=int, required=True)

    p = add("quantum", "random quantum stress test of a correlation catalog")
    p.add_argument("--catalog", choices=sorted(cat.CATALOGS), default="corr3")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--dims", default="2,3,4")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-9)

    p = add("simulate", "Monte Carlo run of the setting-transmission protocol")
    p.add_argument("--table", required=True)
    p.add_argument("--direction", choices=[d.value for d in Direction], default="AtoB")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, required=True)
    return parser


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("format", "out")}


def _facets_source(args, picture=None):
    if getattr(args, "facets", None):
        d = schema.load(args.facets)
        if schema.detect(d) != "hrep":
            raise SchemaError(f"{args.facets} does not hold a facet list")
        return schema.hrep_from_json(d)
    return HRepresentation(cat.catalog_facets(args.catalog))


def cmd_vertices(args):
    s = Scenario(args.M, args.K, args.r)
    return schema.points_to_json(vertex_set(s, args.picture, cap=args.cap))


def cmd_facets(args):
    d = schema.load(args.input)
    kind = schema.detect(d)
    if kind == "points":
        pts = schema.points_from_json(d)
        h = dd_convert(pts)
        out = schema.hrep_to_json(h)
        out["counts"] = {"vertices": len(pts), "facets": len(h.facets), "equations": len(h.equations)}
        return out
    if kind == "hrep":
        pts = dd_convert(schema.hrep_from_json(d))
        out = schema.points_to_json(pts)
        out["counts"] = {"vertices": len(pts)}
        return out
    raise SchemaError(f"{args.input}: expected a point list or facet list, found {kind}")


def cmd_verify(args):
    pts = schema.points_from_json(schema.load(args.vertices))
    h = _facets_source(args)
    dim = affine_dimension(pts)
    reports = [verify_facet(q, pts, dim) for q in h.facets]
    return {"dim": dim, "allFacets": all(r.is_facet for r in reports),
            "reports": [schema.facet_report_to_json(r) for r in reports]}


def _load_point(path):
    d = schema.load(path)
    kind = schema.detect(d)
    if kind == "table":
        t = schema.table_from_json(d)
        return t, kind
    if kind == "corr":
        return schema.corr_from_json(d), kind
    if kind == "vector":
        return schema.vector_from_json(d), kind
    raise SchemaError(f"{path}: expected a table, vector or correlation matrix")


def cmd_check(args):
    obj, kind = _load_point(args.input)
    out = {"kind": kind}
    if kind == "table":
        for direction in Direction:
            ok, witness = one_way_no_signaling(obj, direction)
            out[f"noSignaling{direction.value}"] = {"holds": ok, "witness": [list(w) for w in witness]}
    if args.facets or args.catalog:
        h = _facets_source(args)
    else:
        name = "p221" if kind in ("table", "vector") else "corr3"
        h = HRepresentation(cat.catalog_facets(name))
        out["catalog"] = name
    if kind == "table" and h.picture is Picture.CORRELATION:
        x = to_correlation(obj).coords
    elif kind == "table":
        x = table_to_vector(obj).coords
    else:
        x = obj.coords
    member, violated = membership(x, h)
    worst, margin = cat.max_violation(x, h.facets)
    out.update({
        "member": member,
        "violated": [schema.inequality_to_json(q) | {"value": schema.rat(q.value(x))} for q in violated],
        "maxViolation": {"inequality": schema.inequality_to_json(worst), "margin": schema.rat(margin)},
    })
    if args.vertices:
        pts = schema.points_from_json(schema.load(args.vertices))
        cert = convex_certificate(x, pts)
        if hasattr(cert, "weights"):
            out["certificate"] = {"feasible": True, "weights": [schema.rat(w) for w in cert.weights]}
        else:
            out["certificate"] = {"feasible": False, "y0": schema.rat(cert.y0), "y": [schema.rat(v) for v in cert.y]}
    return out


def cmd_catalog(args):
    if args.family:
        fams = [cat.family(args.family)]
    else:
        fams = cat.catalog(args.name or "p221")
    return {"families": [{"name": f.name, "size": len(f),
                          "members": [schema.inequality_to_json(q) for q in f]} for f in fams]}


def cmd_classify(args):
    h = schema.hrep_from_json(schema.load(args.facets))
    pts = schema.points_from_json(schema.load(args.vertices)) if args.vertices else None
    rep = cat.classify(h.facets, cat.catalog(args.catalog), pts)
    return {"perfect": rep.perfect, "matched": rep.matched,
            "unmatchedComputed": [schema.inequality_to_json(q) for q in rep.unmatched_computed],
            "unmatchedCatalog": [{"family": n, "inequality": schema.inequality_to_json(q)}
                                 for n, q in rep.unmatched_catalog]}


def _matrix(source):
    if source in cat.NAMED_MATRICES:
        return cat.NAMED_MATRICES[source]
    d = schema.load(source)
    rows = d["matrix"] if isinstance(d, dict) else d
    return [[schema.parse_rat(x) for x in row] for row in rows]


def cmd_bound(args):
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    v = quantum_safety_check(_matrix(args.matrix), args.k)
    return v.to_json()


def cmd_quantum(args):
    try:
        dims = [int(x) for x in args.dims.split(",") if x]
    except ValueError:
        raise UsageError(f"--dims must be comma-separated integers, got {args.dims!r}") from None
    fl = cat.catalog_facets(args.catalog)
    if fl.picture is not Picture.CORRELATION:
        raise UsageError("quantum stress test needs a correlation catalog")
    return stress_test(list(fl), args.trials, dims, args.seed, args.tol).to_json()


def cmd_simulate(args):
    t = schema.table_from_json(schema.load(args.table))
    run = simulate(t, args.direction, args.samples, args.seed)
    return run.to_json()


COMMANDS = {
    "vertices": cmd_vertices, "facets": cmd_facets, "verify": cmd_verify, "check": cmd_check,
    "catalog": cmd_catalog, "classify": cmd_classify, "bound": cmd_bound, "quantum": cmd_quantum,
    "simulate": cmd_simulate,
}


def render_text(doc: dict) -> str:
    """Fixed-width rendering of a JSON document."""
    lines = []

    def cell(v):
        if isinstance(v, list):
            return " ".join(cell(x) for x in v)
        if isinstance(v, dict):
            return " ".join(f"{k}={cell(x)}" for k, x in v.items())
        return str(v)

    width = max((len(k) for k in doc), default=0)
    for k, v in doc.items():
        if isinstance(v, list) and v and isinstance(v[0], (list, dict)):
            lines.append(f"{k}:")
            rows = [[cell(x) for x in item] if isinstance(item, list) else
                    [f"{kk}={cell(vv)}" for kk, vv in item.items()] for item in v]
            ncol = max(len(r) for r in rows)
            widths = [max((len(r[c]) for r in rows if c < len(r)), default=0) for c in range(ncol)]
            for r in rows:
                lines.append("  " + " ".join(x.rjust(w) for x, w in zip(r, widths)))
        else:
            lines.append(f"{k.ljust(width)}  {cell(v)}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        payload = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"error: usage: {e}", file=sys.stderr)
        return 2
    except BellCommError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"error: missing_file: {e.filename}", file=sys.stderr)
        return 1
    except (KeyError, ValueError) as e:
        print(f"error: domain_error: {e}", file=sys.stderr)
        return 1
    doc = {"config": _config(args)} | payload
    text = schema.dumps(doc) + "\n" if args.format == "json" else render_text(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
