"""Exact domain types: scenarios, probability tables, correlation matrices,
deterministic protocols and linear inequalities.

Probability tables are indexed ``p[i][j][a][b]`` = p(a, b | i, j): A picks
setting ``i`` and outputs ``a``, B picks ``j`` and outputs ``b``.  All scalars
are :class:`fractions.Fraction`.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import DimensionError, InvalidTableError, ScenarioError
from .linalg import integer_scale


class CommModel(str, enum.Enum):
    LOCAL = "local"
    ONE_BIT = "one_bit"
    UNRESTRICTED = "unrestricted"


class Picture(str, enum.Enum):
    PROBABILITY = "probability"
    CORRELATION = "correlation"


class Direction(str, enum.Enum):
    A_TO_B = "AtoB"
    B_TO_A = "BtoA"


class Pattern(str, enum.Enum):
    NO_COMM = "NoComm"
    A_TO_B = "AtoB"
    B_TO_A = "BtoA"
    FULL = "Full"


def outcome_value(x: int) -> int:
    """Observable value attached to outcome ``x`` (0 -> +1, 1 -> -1)."""
    return 1 - 2 * x


@dataclass(frozen=True)
class Scenario:
    M: int
    K: int = 2
    r: int = 1

    def __post_init__(self):
        if self.M < 1:
            raise ScenarioError(f"M must be >= 1, got {self.M}")
        if self.K < 2:
            raise ScenarioError(f"K must be >= 2, got {self.K}")
        if self.r < 0:
            raise ScenarioError(f"r must be >= 0, got {self.r}")
        if self.r >= 2 and 2 ** self.r < self.M ** 2:
            raise ScenarioError(
                f"r={self.r} bits is neither 0, 1 nor enough to exchange both settings "
                f"(needs 2**r >= M**2); general interactive protocols are not modeled")

    @property
    def comm_model(self) -> CommModel:
        if self.r == 0:
            return CommModel.LOCAL
        if self.r == 1:
            return CommModel.ONE_BIT
        return CommModel.UNRESTRICTED

    @property
    def prob_dim(self) -> int:
        return self.M ** 2 * (self.K ** 2 - 1)

    @property
    def corr_dim(self) -> int:
        return self.M ** 2

    def dim(self, picture: Picture) -> int:
        return self.prob_dim if Picture(picture) is Picture.PROBABILITY else self.corr_dim

    def contexts(self):
        return itertools.product(range(self.M), repeat=2)

    def to_json(self) -> dict:
        return {"M": self.M, "K": self.K, "r": self.r}

    @classmethod
    def from_json(cls, d: dict) -> "Scenario":
        return cls(int(d["M"]), int(d.get("K", 2)), int(d.get("r", 1)))


def _nested(scenario: Scenario, f: Callable[[int, int, int, int], object]):
    M, K = scenario.M, scenario.K
    return tuple(
        tuple(
            tuple(tuple(Fraction(f(a, b, i, j)) for b in range(K)) for a in range(K))
            for j in range(M))
        for i in range(M))


@dataclass(frozen=True)
class ProbTable:
    """Joint distribution p(a, b | i, j) stored as ``p[i][j][a][b]``."""

    scenario: Scenario
    p: tuple

    @classmethod
    def from_function(cls, scenario: Scenario, f: Callable[[int, int, int, int], object]) -> "ProbTable":
        """Build from ``f(a, b, i, j)``."""
        return cls(scenario, _nested(scenario, f))

    @classmethod
    def uniform(cls, scenario: Scenario) -> "ProbTable":
        q = Fraction(1, scenario.K ** 2)
        return cls.from_function(scenario, lambda a, b, i, j: q)

    def __getitem__(self, key) -> Fraction:
        a, b, i, j = key
        return self.p[i][j][a][b]

    def entries(self) -> Iterable[tuple[tuple[int, int, int, int], Fraction]]:
        K = self.scenario.K
        for i, j in self.scenario.contexts():
            for a in range(K):
                for b in range(K):
                    yield (a, b, i, j), self.p[i][j][a][b]

    def marginal_a(self, a: int, i: int, j: int) -> Fraction:
        return sum(self.p[i][j][a], Fraction(0))

    def marginal_b(self, b: int, i: int, j: int) -> Fraction:
        return sum((row[b] for row in self.p[i][j]), Fraction(0))

    def mix(self, other: "ProbTable", weight) -> "ProbTable":
        """``weight * self + (1 - weight) * other``."""
        lam = Fraction(weight)
        return ProbTable.from_function(
            self.scenario, lambda a, b, i, j: lam * self[a, b, i, j] + (1 - lam) * other[a, b, i, j])


@dataclass(frozen=True)
class ValidationReport:
    negative: tuple = ()
    bad_contexts: tuple = ()

    @property
    def valid(self) -> bool:
        return not self.negative and not self.bad_contexts


def validate_prob_table(t: ProbTable) -> ValidationReport:
    """Report negative entries and contexts whose entries do not sum to one.

    ``bad_contexts`` holds ``((i, j), total)`` pairs.
    """
    negative = tuple(key for key, v in t.entries() if v < 0)
    bad = []
    for i, j in t.scenario.contexts():
        total = sum((sum(row, Fraction(0)) for row in t.p[i][j]), Fraction(0))
        if total != 1:
            bad.append(((i, j), total))
    return ValidationReport(negative, tuple(bad))


def _require_valid(t: ProbTable) -> None:
    report = validate_prob_table(t)
    if not report.valid:
        raise InvalidTableError(
            f"invalid probability table: negative={list(report.negative)} "
            f"bad_contexts={[(c, str(s)) for c, s in report.bad_contexts]}")


def one_way_no_signaling(t: ProbTable, direction: Direction | str = Direction.A_TO_B):
    """Check that the sender's marginal ignores the receiver's setting.

    For ``AtoB``, A's marginal p(a | i, j) must not depend on ``j``: then A can
    send ``i`` and B can sample conditionally.  Returns ``(ok, witness)`` where
    the witness lists ``(a, i, j, j2)`` (resp. ``(b, j, i, i2)``) with differing
    marginals.
    """
    _require_valid(t)
    direction = Direction(direction)
    M, K = t.scenario.M, t.scenario.K
    witness = []
    for x in range(K):
        for s in range(M):
            if direction is Direction.A_TO_B:
                margs = [t.marginal_a(x, s, o) for o in range(M)]
            else:
                margs = [t.marginal_b(x, o, s) for o in range(M)]
            for o in range(1, M):
                if margs[o] != margs[0]:
                    witness.append((x, s, 0, o))
    return not witness, witness


@dataclass(frozen=True)
class CorrMatrix:
    scenario: Scenario
    c: tuple

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(x for row in self.c for x in row)

    @classmethod
    def from_coords(cls, scenario: Scenario, coords: Sequence) -> "CorrMatrix":
        M = scenario.M
        if len(coords) != M * M:
            raise DimensionError(f"expected {M * M} correlation coordinates, got {len(coords)}")
        vals = [Fraction(x) for x in coords]
        return cls(scenario, tuple(tuple(vals[i * M:(i + 1) * M]) for i in range(M)))


def to_correlation(t: ProbTable) -> CorrMatrix:
    """Joint correlation observable c_ij = sum_ab v(a) v(b) p(a, b | i, j)."""
    if t.scenario.K != 2:
        raise ScenarioError("correlation picture needs K = 2")
    _require_valid(t)
    M = t.scenario.M
    c = tuple(
        tuple(
            sum((outcome_value(a) * outcome_value(b) * t.p[i][j][a][b]
                 for a in range(2) for b in range(2)), Fraction(0))
            for j in range(M))
        for i in range(M))
    return CorrMatrix(t.scenario, c)


@dataclass(frozen=True)
class DetProtocol:
    """Deterministic protocol in factored form.

    NoComm: ``alpha[i]``, ``beta[j]``.
    AtoB: ``alpha[i]``, ``msg[i]`` in {0, 1}, ``beta[m][j]``.
    BtoA: ``beta[j]``, ``msg[j]`` in {0, 1}, ``alpha[m][i]``.
    Full (unrestricted communication): ``alpha[i][j]``, ``beta[i][j]``.
    """

    scenario: Scenario
    pattern: Pattern
    alpha: tuple
    beta: tuple
    msg: tuple = field(default=())

    def outputs(self, i: int, j: int) -> tuple[int, int]:
        pat = self.pattern
        if pat is Pattern.NO_COMM:
            return self.alpha[i], self.beta[j]
        if pat is Pattern.A_TO_B:
            return self.alpha[i], self.beta[self.msg[i]][j]
        if pat is Pattern.B_TO_A:
            return self.alpha[self.msg[j]][i], self.beta[j]
        return self.alpha[i][j], self.beta[i][j]


def protocol_table(d: DetProtocol) -> ProbTable:
    outs = {(i, j): d.outputs(i, j) for i, j in d.scenario.contexts()}
    return ProbTable.from_function(d.scenario, lambda a, b, i, j: int(outs[i, j] == (a, b)))


@dataclass(frozen=True)
class ProbVector:
    scenario: Scenario
    coords: tuple


def table_to_vector(t: ProbTable) -> ProbVector:
    """Drop p(K-1, K-1 | i, j) from each context; order by (i, j, a, b)."""
    K = t.scenario.K
    coords = []
    for i, j in t.scenario.contexts():
        for a in range(K):
            for b in range(K):
                if (a, b) != (K - 1, K - 1):
                    coords.append(t.p[i][j][a][b])
    return ProbVector(t.scenario, tuple(coords))


def vector_to_table(v: ProbVector) -> ProbTable:
    s = v.scenario
    K = s.K
    per = K * K - 1
    if len(v.coords) != s.prob_dim:
        raise DimensionError(f"expected {s.prob_dim} coordinates, got {len(v.coords)}")
    vals = [Fraction(x) for x in v.coords]
    ctx = {}
    for n, (i, j) in enumerate(s.contexts()):
        chunk = vals[n * per:(n + 1) * per]
        ctx[i, j] = chunk + [1 - sum(chunk, Fraction(0))]

    return ProbTable.from_function(s, lambda a, b, i, j: ctx[i, j][a * K + b])


def prob_coordinate(scenario: Scenario, a: int, b: int, i: int, j: int) -> int:
    """Index of p(a, b | i, j) in the vector; the dropped entry raises."""
    K = scenario.K
    if (a, b) == (K - 1, K - 1):
        raise KeyError("p(K-1, K-1 | i, j) is eliminated by normalization")
    per = K * K - 1
    return (i * scenario.M + j) * per + a * K + b


@dataclass(frozen=True, order=False)
class LinearInequality:
    """``coeffs . x <= bound`` in the given picture."""

    picture: Picture
    coeffs: tuple
    bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, "picture", Picture(self.picture))
        object.__setattr__(self, "coeffs", tuple(Fraction(x) for x in self.coeffs))
        object.__setattr__(self, "bound", Fraction(self.bound))

    def value(self, x: Sequence) -> Fraction:
        if len(x) != len(self.coeffs):
            raise DimensionError(f"point has {len(x)} coordinates, inequality has {len(self.coeffs)}")
        return sum((c * Fraction(v) for c, v in zip(self.coeffs, x) if c), Fraction(0))

    def holds(self, x: Sequence) -> bool:
        return self.value(x) <= self.bound

    def canonical(self) -> "LinearInequality":
        ints = integer_scale(list(self.coeffs) + [self.bound])
        if not any(ints):
            return self
        return LinearInequality(self.picture, ints[:-1], ints[-1])

    def sort_key(self):
        return (self.bound, self.coeffs)

    @classmethod
    def from_table(cls, scenario: Scenario, f: Callable[[int, int, int, int], object], bound) -> "LinearInequality":
        """Inequality sum_{abij} f(a,b,i,j) p(a,b|i,j) <= bound, rewritten in
        vector coordinates via normalization."""
        K = scenario.K
        coeffs = [Fraction(0)] * scenario.prob_dim
        rhs = Fraction(bound)
        for i, j in scenario.contexts():
            last = Fraction(f(K - 1, K - 1, i, j))
            rhs -= last
            for a in range(K):
                for b in range(K):
                    if (a, b) != (K - 1, K - 1):
                        coeffs[prob_coordinate(scenario, a, b, i, j)] += Fraction(f(a, b, i, j)) - last
        return cls(Picture.PROBABILITY, coeffs, rhs)

    @classmethod
    def from_corr_matrix(cls, matrix: Sequence[Sequence], bound) -> "LinearInequality":
        return cls(Picture.CORRELATION, [x for row in matrix for x in row], bound)


@dataclass(frozen=True)
class TableInequality:
    """``sum coeffs[(a, b, i, j)] * p(a, b | i, j) <= bound`` over the full table."""

    scenario: Scenario
    coeffs: tuple  # sorted ((a, b, i, j), coefficient) pairs, zeros dropped
    bound: Fraction

    @classmethod
    def from_function(cls, scenario: Scenario, f: Callable[[int, int, int, int], object], bound) -> "TableInequality":
        K = scenario.K
        items = []
        for i, j in scenario.contexts():
            for a in range(K):
                for b in range(K):
                    c = Fraction(f(a, b, i, j))
                    if c:
                        items.append(((a, b, i, j), c))
        return cls(scenario, tuple(sorted(items)), Fraction(bound))

    def value(self, t: ProbTable) -> Fraction:
        return sum((c * t[key] for key, c in self.coeffs), Fraction(0))

    def holds(self, t: ProbTable) -> bool:
        return self.value(t) <= self.bound

    def reduced(self) -> LinearInequality:
        """Same constraint in vector coordinates (valid on normalized tables)."""
        d = dict(self.coeffs)
        return LinearInequality.from_table(self.scenario, lambda *k: d.get(k, 0), self.bound)


def point_of(obj) -> tuple:
    """Coordinates of a table, vector or correlation matrix."""
    if isinstance(obj, ProbTable):
        return table_to_vector(obj).coords
    if isinstance(obj, ProbVector):
        return obj.coords
    if isinstance(obj, CorrMatrix):
        return obj.coords
    return tuple(Fraction(x) for x in obj)


@dataclass(frozen=True)
class PointList:
    picture: Picture
    scenario: Scenario | None
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "picture", Picture(self.picture))
        pts = sorted({tuple(Fraction(x) for x in p) for p in self.points})
        object.__setattr__(self, "points", tuple(pts))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def dim(self) -> int:
        return len(self.points[0]) if self.points else 0


@dataclass(frozen=True)
class FacetList:
    picture: Picture
    inequalities: tuple

    def __post_init__(self):
        object.__setattr__(self, "picture", Picture(self.picture))
        canon = {q.canonical() for q in self.inequalities}
        object.__setattr__(self, "inequalities", tuple(sorted(canon, key=LinearInequality.sort_key)))

    def __len__(self):
        return len(self.inequalities)

    def __iter__(self):
        return iter(self.inequalities)
