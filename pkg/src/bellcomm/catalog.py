"""Explicit inequality families, signed-permutation orbits and facet
classification."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .core import (FacetList, LinearInequality, Picture, PointList, Scenario, TableInequality, outcome_value,
                   point_of)

F = Fraction

#: Seed coefficient matrices of the two nontrivial correlation facet classes (M = 3).
M1 = tuple(tuple(F(x, 6) for x in row) for row in ((0, -1, 1), (-1, 1, 1), (1, 1, 1)))
M2 = tuple(tuple(F(x, 11) for x in row) for row in ((1, 2, -2), (2, 1, 2), (-2, 2, 1)))

NAMED_MATRICES = {"M1": M1, "M2": M2}

EQ2_A_PATTERNS = ("0101", "1010", "0110", "1001")
EQ2_B_PATTERNS = ("0011", "1100", "0110", "1001")

P221 = Scenario(2, 2, 1)
P220 = Scenario(2, 2, 0)


@dataclass(frozen=True)
class CatalogFamily:
    name: str
    members: FacetList
    labels: tuple = field(default=(), compare=False)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


# ---------------------------------------------------------------------------
# probability-picture families (M = K = 2)


def positivity(scenario: Scenario = P221) -> list[LinearInequality]:
    out = []
    for i, j in scenario.contexts():
        for a in range(scenario.K):
            for b in range(scenario.K):
                key = (a, b, i, j)
                out.append(LinearInequality.from_table(
                    scenario, lambda *k, key=key: -int(k == key), 0))
    return out


def eq2_table(a_pattern: str, b_pattern: str, scenario: Scenario = P221) -> TableInequality:
    """p(a1,b1|0,0) + p(a2,b2|0,1) + p(a3,b3|1,0) + p(a4,b4|1,1) <= 2."""
    ctx = ((0, 0), (0, 1), (1, 0), (1, 1))
    picks = {(int(a), int(b), i, j) for a, b, (i, j) in zip(a_pattern, b_pattern, ctx)}
    return TableInequality.from_function(scenario, lambda *k: int(k in picks), 2)


def eq2_inequality(a_pattern: str, b_pattern: str, scenario: Scenario = P221) -> LinearInequality:
    return eq2_table(a_pattern, b_pattern, scenario).reduced()


def eq3_inequality(i: int, j: int, a: int, b: int, scenario: Scenario = P221) -> LinearInequality:
    return eq3_table(i, j, a, b, scenario).reduced()


def eq3_table(i: int, j: int, a: int, b: int, scenario: Scenario = P221) -> TableInequality:
    """A's marginal at (i, j) plus B's marginal at (i', j') minus p(a,b|i,j') >= 0,
    stored negated as a <= 0 inequality."""
    ib, jb = 1 - i, 1 - j

    def f(x, y, s, t):
        v = 0
        if (s, t) == (i, j) and x == a:
            v += 1
        if (s, t) == (ib, jb) and y == b:
            v += 1
        if (x, y, s, t) == (a, b, i, jb):
            v -= 1
        return -v

    return TableInequality.from_function(scenario, f, 0)


def chsh_correlation_signs() -> list[tuple[int, int, int, int]]:
    """Sign patterns (s00, s01, s10, s11) with an odd number of minus signs."""
    return [s for s in itertools.product((1, -1), repeat=4) if s.count(-1) % 2 == 1]


def chsh_probability(signs, scenario: Scenario = P220) -> LinearInequality:
    """sum_ij s_ij c_ij <= 2 expressed on probabilities."""
    s = dict(zip(((0, 0), (0, 1), (1, 0), (1, 1)), signs))
    return LinearInequality.from_table(
        scenario, lambda a, b, i, j: s[i, j] * outcome_value(a) * outcome_value(b), 2)


# ---------------------------------------------------------------------------
# correlation picture


def trivial_correlation(M: int) -> list[LinearInequality]:
    out = []
    for k in range(M * M):
        for sign in (1, -1):
            coeffs = [0] * (M * M)
            coeffs[k] = sign
            out.append(LinearInequality(Picture.CORRELATION, coeffs, 1))
    return out


def chsh_correlation() -> list[LinearInequality]:
    return [LinearInequality(Picture.CORRELATION, s, 2) for s in chsh_correlation_signs()]


@dataclass(frozen=True)
class SignedPermGroupElement:
    row_perm: tuple
    col_perm: tuple
    row_signs: tuple
    col_signs: tuple

    def act(self, matrix: Sequence[Sequence]) -> tuple:
        """(g.M)[i][j] = rs[i] cs[j] M[rp^-1(i)][cp^-1(j)]."""
        n = len(self.row_perm)
        rinv = [0] * n
        cinv = [0] * n
        for k, v in enumerate(self.row_perm):
            rinv[v] = k
        for k, v in enumerate(self.col_perm):
            cinv[v] = k
        return tuple(
            tuple(F(self.row_signs[i] * self.col_signs[j]) * F(matrix[rinv[i]][cinv[j]]) for j in range(n))
            for i in range(n))


@lru_cache(maxsize=None)
def signed_permutation_group(n: int = 3) -> tuple:
    """All n!^2 * 4^n elements, including the trivially acting global flip."""
    perms = list(itertools.permutations(range(n)))
    signs = list(itertools.product((1, -1), repeat=n))
    return tuple(SignedPermGroupElement(rp, cp, rs, cs)
                 for rp in perms for cp in perms for rs in signs for cs in signs)


def _as_matrix(m) -> tuple:
    return tuple(tuple(F(x) for x in row) for row in m)


def orbit(seed: Sequence[Sequence]) -> tuple:
    """Distinct images of ``seed`` under row/column permutations and sign flips."""
    seed = _as_matrix(seed)
    n = len(seed)
    return tuple(sorted({g.act(seed) for g in signed_permutation_group(n)}))


def orbit_inequalities(seed, bound=1) -> list[LinearInequality]:
    return [LinearInequality.from_corr_matrix(m, bound) for m in orbit(seed)]


def family(name: str) -> CatalogFamily:
    """Named inequality family as a canonical facet list."""
    try:
        build = _FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown family {name!r}; known: {sorted(_FAMILIES)}") from None
    ineqs, picture, labels = build()
    return CatalogFamily(name, FacetList(picture, tuple(ineqs)), tuple(labels))


def _positivity22():
    s = P221
    labels = [f"p({a},{b}|{i},{j})>=0" for i, j in s.contexts() for a in range(2) for b in range(2)]
    return positivity(s), Picture.PROBABILITY, labels


def _eq2():
    pairs = list(itertools.product(EQ2_A_PATTERNS, EQ2_B_PATTERNS))
    return [eq2_inequality(a, b) for a, b in pairs], Picture.PROBABILITY, [f"a={a},b={b}" for a, b in pairs]


def _eq3():
    quads = list(itertools.product(range(2), repeat=4))
    return ([eq3_inequality(*q) for q in quads], Picture.PROBABILITY,
            ["i={},j={},a={},b={}".format(*q) for q in quads])


def _chsh22():
    sg = chsh_correlation_signs()
    return [chsh_probability(s) for s in sg], Picture.PROBABILITY, [str(s) for s in sg]


def _positivity_local():
    return positivity(P220), Picture.PROBABILITY, []


_FAMILIES = {
    "Positivity22": _positivity22,
    "Eq2Family": _eq2,
    "Eq3Family": _eq3,
    "PositivityLocal22": _positivity_local,
    "Chsh22": _chsh22,
    "TrivialCorr2": lambda: (trivial_correlation(2), Picture.CORRELATION, []),
    "ChshCorr2": lambda: (chsh_correlation(), Picture.CORRELATION, []),
    "TrivialCorr3": lambda: (trivial_correlation(3), Picture.CORRELATION, []),
    "OrbitM1": lambda: (orbit_inequalities(M1), Picture.CORRELATION, []),
    "OrbitM2": lambda: (orbit_inequalities(M2), Picture.CORRELATION, []),
}

FAMILY_NAMES = tuple(_FAMILIES)

#: Named catalogs: lists of family names.
CATALOGS = {
    "p221": ("Positivity22", "Eq2Family", "Eq3Family"),
    "p220": ("PositivityLocal22", "Chsh22"),
    "corr2": ("TrivialCorr2",),
    "chsh2": ("TrivialCorr2", "ChshCorr2"),
    "corr3": ("TrivialCorr3", "OrbitM1", "OrbitM2"),
}

#: Scenario each named catalog describes.
CATALOG_SCENARIOS = {
    "p221": (P221, Picture.PROBABILITY),
    "p220": (P220, Picture.PROBABILITY),
    "corr2": (Scenario(2, 2, 1), Picture.CORRELATION),
    "chsh2": (Scenario(2, 2, 0), Picture.CORRELATION),
    "corr3": (Scenario(3, 2, 1), Picture.CORRELATION),
}


def catalog(name: str) -> list[CatalogFamily]:
    try:
        return [family(f) for f in CATALOGS[name]]
    except KeyError:
        raise KeyError(f"unknown catalog {name!r}; known: {sorted(CATALOGS)}") from None


def catalog_facets(name: str) -> FacetList:
    fams = catalog(name)
    return FacetList(fams[0].members.picture, tuple(q for f in fams for q in f))


def corr_catalog_M3() -> FacetList:
    return catalog_facets("corr3")


# ---------------------------------------------------------------------------
# evaluation and classification


@dataclass(frozen=True)
class Classification:
    matched: dict
    unmatched_computed: tuple
    unmatched_catalog: tuple  # (family name, inequality)

    @property
    def perfect(self) -> bool:
        return not self.unmatched_computed and not self.unmatched_catalog


def classify(computed: Iterable[LinearInequality], families: Sequence[CatalogFamily],
             points: PointList | None = None) -> Classification:
    """Match computed facets against catalog members.

    Without ``points`` inequalities are compared in canonical form, which is
    exact for full-dimensional polytopes.  With ``points`` two inequalities
    match when they are tight on the same vertices, which also works when
    facets are only defined modulo affine-hull equations.
    """
    if points is not None:
        pts = list(points.points)

        def key(q):
            return frozenset(k for k, p in enumerate(pts) if q.value(p) == q.bound)
    else:
        def key(q):
            return q.canonical()

    remaining = {}
    for q in computed:
        remaining.setdefault(key(q), []).append(q)
    matched = {}
    missing = []
    for fam in families:
        count = 0
        for q in fam:
            k = key(q)
            if remaining.get(k):
                remaining[k].pop()
                count += 1
            else:
                missing.append((fam.name, q))
        matched[fam.name] = count
    left = tuple(q for qs in remaining.values() for q in qs)
    return Classification(matched, left, tuple(missing))


def evaluate(ineq: LinearInequality, point) -> Fraction:
    return ineq.value(point_of(point))


def max_violation(point, inequalities: Iterable[LinearInequality]) -> tuple[LinearInequality, Fraction]:
    """Member with the largest ``value - bound``; a margin <= 0 means all hold."""
    x = point_of(point)
    best = None
    for q in inequalities:
        margin = q.value(x) - q.bound
        if best is None or margin > best[1]:
            best = (q, margin)
    if best is None:
        raise ValueError("no inequalities given")
    return best
