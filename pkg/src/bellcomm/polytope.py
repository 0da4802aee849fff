"""Exact convex geometry: affine hulls, double description, facet checks and
membership certificates.

The double description routine works on pointed polyhedral cones
``{y : R y >= 0}`` with integer constraint rows.  Vertex-to-facet conversion
runs it on the polar cone of the homogenized points; facet-to-vertex
conversion runs it on the homogenized inequality system.  Adjacency is tested
combinatorially with bitsets of active constraints, so the ray arithmetic
stays in Python integers and is exact.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import FacetList, LinearInequality, Picture, PointList, Scenario
from .errors import DimensionError, UnboundedError
from .linalg import dot, integer_scale, inverse, nullspace, primitive, rank, rref
from .lp import feasible_convex_combination

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HRepresentation:
    """Facets ``coeffs . x <= bound`` plus affine-hull equations ``coeffs . x == bound``."""

    facets: FacetList
    equations: tuple = ()
    scenario: Scenario | None = None

    @property
    def picture(self) -> Picture:
        return self.facets.picture

    @property
    def dim(self) -> int | None:
        for q in list(self.facets) + list(self.equations):
            return len(q.coeffs)
        return None


@dataclass(frozen=True)
class FacetReport:
    inequality: LinearInequality
    valid: bool
    tight_rank: int
    polytope_dim: int
    violations: tuple = ()

    @property
    def is_facet(self) -> bool:
        return self.valid and self.tight_rank == self.polytope_dim - 1


@dataclass(frozen=True)
class MembershipCertificate:
    weights: tuple
    points: tuple = field(repr=False, default=())

    def check(self, x: Sequence) -> bool:
        if any(w < 0 for w in self.weights) or sum(self.weights) != 1:
            return False
        n = len(x)
        combo = [sum((w * p[k] for w, p in zip(self.weights, self.points) if w), Fraction(0)) for k in range(n)]
        return combo == [Fraction(v) for v in x]


@dataclass(frozen=True)
class Infeasible:
    """Farkas witness ``(y0, y)``: ``y0 + y . v <= 0`` for every vertex, ``> 0`` at the query."""

    y0: Fraction
    y: tuple

    def separating_inequality(self, picture: Picture) -> LinearInequality:
        # y0 + y.v <= 0 on the polytope, i.e. y.v <= -y0
        return LinearInequality(picture, self.y, -self.y0)


def affine_dimension(points: PointList | Sequence[Sequence]) -> int:
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if not pts:
        raise ValueError("affine dimension of an empty point set is undefined")
    base = pts[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in pts[1:]]
    return rank(diffs) if diffs else 0


# ---------------------------------------------------------------------------
# double description on pointed cones


def _initial_rows(rows: Sequence[Sequence[int]], d: int) -> list[int]:
    chosen: list[int] = []
    basis: list[list[Fraction]] = []
    for k, row in enumerate(rows):
        trial = basis + [list(map(Fraction, row))]
        if rank(trial) > len(basis):
            basis, _ = rref(trial)
            chosen.append(k)
            if len(chosen) == d:
                break
    return chosen


def extreme_rays(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Extreme rays of ``{y : row . y >= 0 for all rows}`` (primitive integer vectors).

    The constraint matrix must have full column rank (pointed cone).  Rows are
    inserted in the given order.
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    d = len(rows[0])
    init = _initial_rows(rows, d)
    if len(init) < d:
        raise UnboundedError(f"constraint system has rank {len(init)} < {d}: cone has a lineality space")
    inv = inverse([[Fraction(x) for x in rows[k]] for k in init])
    rays = [integer_scale([inv[r][c] for r in range(d)]) for c in range(d)]
    all_init = 0
    for k in init:
        all_init |= 1 << k
    zeros = [all_init & ~(1 << k) for k in init]
    init_set = set(init)
    rest = [k for k in range(len(rows)) if k not in init_set]

    for step, h in enumerate(rest):
        row = rows[h]
        vals = [dot(row, r) for r in rays]
        pos = [n for n, v in enumerate(vals) if v > 0]
        neg = [n for n, v in enumerate(vals) if v < 0]
        zer = [n for n, v in enumerate(vals) if v == 0]
        new_rays = [rays[n] for n in pos] + [rays[n] for n in zer]
        new_zeros = [zeros[n] for n in pos] + [zeros[n] | (1 << h) for n in zer]
        if pos and neg:
            for p, n in _adjacent_pairs(pos, neg, zeros, d):
                vp, vn = vals[p], -vals[n]
                rp, rn = rays[p], rays[n]
                new_rays.append(primitive([vp * b + vn * a for a, b in zip(rp, rn)]))
                new_zeros.append((zeros[p] & zeros[n]) | (1 << h))
        rays, zeros = new_rays, new_zeros
        log.debug("dd step %d/%d: %d rays", step + 1, len(rest), len(rays))
    return rays


def _adjacent_pairs(pos, neg, zeros, d):
    """Pairs (p, n) whose common active set is contained in no third ray's."""
    need = d - 2
    zmask = zeros
    pairs = []
    cands = []
    for p in pos:
        zp = zmask[p]
        for n in neg:
            c = zp & zmask[n]
            if c.bit_count() >= need:
                cands.append((p, n, c))
    if not cands:
        return pairs
    if len(cands) * len(zmask) < 200_000:
        for p, n, c in cands:
            if not any((z & c) == c for k, z in enumerate(zmask) if k != p and k != n):
                pairs.append((p, n))
        return pairs
    # vectorised containment test over bit matrices
    nbits = max(z.bit_length() for z in zmask)
    nbytes = (nbits + 7) // 8
    Z = _bits_matrix(zmask, nbytes)
    for start in range(0, len(cands), 2048):
        chunk = cands[start:start + 2048]
        C = _bits_matrix([c for _, _, c in chunk], nbytes)
        sizes = C.sum(axis=1)
        contained = (C.astype(np.int32) @ Z.T.astype(np.int32)) == sizes[:, None]
        # p and n always contain the common set; any extra container breaks adjacency
        hits = contained.sum(axis=1)
        for (p, n, _), h in zip(chunk, hits):
            if h == 2:
                pairs.append((p, n))
    return pairs


def _bits_matrix(masks, nbytes):
    raw = b"".join(m.to_bytes(nbytes, "little") for m in masks)
    arr = np.frombuffer(raw, dtype=np.uint8).reshape(len(masks), nbytes)
    return np.unpackbits(arr, axis=1, bitorder="little").astype(np.uint8)


# ---------------------------------------------------------------------------
# affine hull handling


@dataclass(frozen=True)
class _Hull:
    """Affine hull as pivot coordinates expressed through the free ones:
    x[pivot] = const - sum(coef[f] * x[f])."""

    n: int
    pivots: tuple
    free: tuple
    rows: tuple  # (const, {free: coef}) per pivot

    def lift(self, z: Sequence[Fraction]) -> tuple:
        x = [Fraction(0)] * self.n
        for f, v in zip(self.free, z):
            x[f] = Fraction(v)
        for p, (const, coefs) in zip(self.pivots, self.rows):
            x[p] = const - sum((c * x[f] for f, c in coefs.items()), Fraction(0))
        return tuple(x)

    def project(self, x: Sequence) -> tuple:
        return tuple(Fraction(x[f]) for f in self.free)

    def equations(self, picture: Picture) -> tuple:
        eqs = []
        for p, (const, coefs) in zip(self.pivots, self.rows):
            c = [Fraction(0)] * self.n
            c[p] = Fraction(1)
            for f, v in coefs.items():
                c[f] = v
            eqs.append(_canonical_equation(LinearInequality(picture, c, const)))
        return tuple(sorted(eqs, key=LinearInequality.sort_key))


def _canonical_equation(q: LinearInequality) -> LinearInequality:
    q = q.canonical()
    lead = next((c for c in q.coeffs if c), Fraction(1))
    if lead < 0:
        q = LinearInequality(q.picture, [-c for c in q.coeffs], -q.bound)
    return q


def _hull_from_equations(n: int, eqs: Sequence[tuple[Sequence[Fraction], Fraction]]) -> _Hull:
    if not eqs:
        return _Hull(n, (), tuple(range(n)), ())
    aug = [list(map(Fraction, c)) + [Fraction(b)] for c, b in eqs]
    red, pivots = rref(aug)
    if n in pivots:
        raise DimensionError("equations are inconsistent")
    free = tuple(c for c in range(n) if c not in pivots)
    rows = tuple((r[n], {f: r[f] for f in free if r[f]}) for r in red)
    return _Hull(n, tuple(pivots), free, rows)


def _hull_of_points(pts: Sequence[Sequence[Fraction]]) -> _Hull:
    n = len(pts[0])
    homog = [[Fraction(1)] + list(p) for p in pts]
    # (e0, e) with e0 + e.x = 0 for all points
    null = nullspace(homog, n + 1)
    return _hull_from_equations(n, [(v[1:], -v[0]) for v in null])


# ---------------------------------------------------------------------------
# conversions


def vertices_to_facets(points: PointList) -> HRepresentation:
    """Irredundant facet list plus affine-hull equations of conv(points)."""
    if not len(points):
        raise ValueError("empty point list")
    pts = list(points.points)
    hull = _hull_of_points(pts)
    proj = [hull.project(p) for p in pts]
    rows = [integer_scale([Fraction(1)] + list(z)) for z in proj]
    facets = []
    if hull.free:
        for y in extreme_rays(rows):
            y0, yv = y[0], y[1:]
            if not any(yv):
                continue
            coeffs = [Fraction(0)] * hull.n
            for f, v in zip(hull.free, yv):
                coeffs[f] = Fraction(-v)
            facets.append(LinearInequality(points.picture, coeffs, y0))
    return HRepresentation(FacetList(points.picture, tuple(facets)), hull.equations(points.picture), points.scenario)


def facets_to_vertices(h: HRepresentation) -> PointList:
    """Exact vertex list of a bounded H-polytope."""
    n = h.dim
    if n is None:
        raise UnboundedError("no constraints: region is unbounded")
    for q in list(h.facets) + list(h.equations):
        if len(q.coeffs) != n:
            raise DimensionError("inequalities of different lengths")
    hull = _hull_from_equations(n, [(q.coeffs, q.bound) for q in h.equations])
    k = len(hull.free)
    # substitute pivots: a.x = a_free.z + sum_p a_p (const_p - coefs_p.z)
    reduced = []
    for q in h.facets:
        b = q.bound
        a = {f: q.coeffs[f] for f in hull.free}
        for p, (const, coefs) in zip(hull.pivots, hull.rows):
            ap = q.coeffs[p]
            if ap:
                b -= ap * const
                for f, c in coefs.items():
                    a[f] -= ap * c
        reduced.append(([a[f] for f in hull.free], b))
    if k == 0:
        if any(b < 0 for _, b in reduced):
            raise UnboundedError("constraint system is empty")
        return PointList(h.picture, h.scenario, (hull.lift(()),))
    # cone {(t, z) : b t - a.z >= 0, t >= 0}
    rows = [integer_scale([b] + [-x for x in a]) for a, b in reduced]
    rows.append(tuple([1] + [0] * k))
    rays = extreme_rays(rows)
    verts = []
    for y in rays:
        t = y[0]
        if t == 0:
            raise UnboundedError("inequalities admit a recession direction: region is unbounded or empty")
        verts.append(hull.lift([Fraction(v, t) for v in y[1:]]))
    return PointList(h.picture, h.scenario, tuple(verts))


def dd_convert(obj):
    """Switch between vertex and facet representations."""
    if isinstance(obj, PointList):
        return vertices_to_facets(obj)
    if isinstance(obj, HRepresentation):
        return facets_to_vertices(obj)
    raise TypeError(f"cannot convert {type(obj).__name__}")


# ---------------------------------------------------------------------------
# checks


def verify_facet(ineq: LinearInequality, points: PointList, polytope_dim: int | None = None) -> FacetReport:
    pts = list(points.points)
    if pts and len(ineq.coeffs) != len(pts[0]):
        raise DimensionError(f"inequality has {len(ineq.coeffs)} coefficients, points have {len(pts[0])}")
    if polytope_dim is None:
        polytope_dim = affine_dimension(pts)
    vals = [ineq.value(p) for p in pts]
    violations = tuple(k for k, v in enumerate(vals) if v > ineq.bound)
    tight = [p for p, v in zip(pts, vals) if v == ineq.bound]
    tight_rank = affine_dimension(tight) if tight else -1
    return FacetReport(ineq, not violations, tight_rank, polytope_dim, violations)


def membership(point: Sequence, h: HRepresentation) -> tuple[bool, list]:
    """Exact check against every facet and equation; returns the violated ones."""
    x = tuple(Fraction(v) for v in point)
    if h.dim is not None and len(x) != h.dim:
        raise DimensionError(f"point has {len(x)} coordinates, constraints have {h.dim}")
    violated = [q for q in h.facets if q.value(x) > q.bound]
    violated += [q for q in h.equations if q.value(x) != q.bound]
    return not violated, violated


def convex_certificate(point: Sequence, points: PointList):
    """Convex weights reproducing ``point`` exactly, or a Farkas witness."""
    x = tuple(Fraction(v) for v in point)
    pts = list(points.points)
    if pts and len(x) != len(pts[0]):
        raise DimensionError(f"point has {len(x)} coordinates, vertices have {len(pts[0])}")
    ok, data = feasible_convex_combination(pts, x)
    if ok:
        cert = MembershipCertificate(tuple(data), tuple(pts))
        assert cert.check(x)
        return cert
    y0, y = data
    # y0 + y.v <= 0 for all vertices, y0 + y.x > 0
    assert all(y0 + dot(y, v) <= 0 for v in pts) and y0 + dot(y, x) > 0
    return Infeasible(y0, tuple(y))
