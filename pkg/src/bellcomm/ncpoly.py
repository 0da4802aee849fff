"""Noncommutative polynomials in involutions A_1..A_M, B_1..B_M.

Each generator squares to the identity and every A commutes with every B, so
a monomial is a pair of reduced words (no two equal adjacent letters), one per
family.  Every such monomial is a product of unitaries and has operator norm
at most one, which makes the sum of absolute coefficients an upper bound on
the norm of the operator a polynomial represents.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence


def _join(u: tuple, v: tuple) -> tuple:
    k = 0
    n = min(len(u), len(v))
    while k < n and u[len(u) - 1 - k] == v[k]:
        k += 1
    return u[:len(u) - k] + v[k:]


@dataclass(frozen=True, order=True)
class NCMonomial:
    a_word: tuple = ()
    b_word: tuple = ()

    def __post_init__(self):
        for w in (self.a_word, self.b_word):
            if any(x == y for x, y in zip(w, w[1:])):
                raise ValueError(f"word {w} is not reduced")

    def __mul__(self, other: "NCMonomial") -> "NCMonomial":
        return NCMonomial(_join(self.a_word, other.a_word), _join(self.b_word, other.b_word))

    @property
    def is_identity(self) -> bool:
        return not self.a_word and not self.b_word

    def __str__(self):
        s = "".join(f"A{x}" for x in self.a_word) + "".join(f"B{x}" for x in self.b_word)
        return s or "I"


IDENTITY = NCMonomial()


class NCPolynomial:
    """Finite rational combination of monomials; zero terms are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[NCMonomial, object] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[m] = c
        self._terms = clean

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        return isinstance(other, NCPolynomial) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "NCPolynomial") -> "NCPolynomial":
        out = defaultdict(Fraction, self._terms)
        for m, c in other._terms.items():
            out[m] += c
        return NCPolynomial(out)

    def scale(self, c) -> "NCPolynomial":
        return NCPolynomial({m: Fraction(c) * v for m, v in self._terms.items()})

    def __mul__(self, other: "NCPolynomial") -> "NCPolynomial":
        return nc_mul(self, other)

    def __pow__(self, k: int) -> "NCPolynomial":
        return nc_pow(self, k)

    def coefficient(self, m: NCMonomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def __repr__(self):
        if not self._terms:
            return "NCPolynomial(0)"
        body = " + ".join(f"({c}){m}" for m, c in sorted(self._terms.items()))
        return f"NCPolynomial({body})"


def generator(family: str, index: int) -> NCPolynomial:
    if family == "A":
        return NCPolynomial({NCMonomial((index,), ()): 1})
    if family == "B":
        return NCPolynomial({NCMonomial((), (index,)): 1})
    raise ValueError(f"family must be 'A' or 'B', got {family!r}")


def from_matrix(matrix: Sequence[Sequence]) -> NCPolynomial:
    """T = sum_ij M[i][j] A_{i+1} B_{j+1}."""
    return NCPolynomial({
        NCMonomial((i + 1,), (j + 1,)): c
        for i, row in enumerate(matrix) for j, c in enumerate(row) if c
    })


def nc_mul(p: NCPolynomial, q: NCPolynomial) -> NCPolynomial:
    out: dict = defaultdict(Fraction)
    for m1, c1 in p._terms.items():
        for m2, c2 in q._terms.items():
            out[m1 * m2] += c1 * c2
    return NCPolynomial(out)


def nc_pow(p: NCPolynomial, k: int) -> NCPolynomial:
    if k < 1:
        raise ValueError("power must be >= 1")
    result = p
    for _ in range(k - 1):
        result = nc_mul(result, p)
    return result


def coeff_abs_sum(p: NCPolynomial) -> Fraction:
    return sum((abs(c) for c in p._terms.values()), Fraction(0))


@dataclass(frozen=True)
class SafetyVerdict:
    sum: Fraction
    k: int
    certified: bool

    @property
    def verdict(self) -> str:
        return "certified" if self.certified else "inconclusive"

    def to_json(self) -> dict:
        return {"sum": str(self.sum), "k": self.k, "certified": self.certified, "verdict": self.verdict}


def quantum_safety_check(matrix: Sequence[Sequence], k: int) -> SafetyVerdict:
    """Certify Tr[rho T] <= 1 for every state and +-1 observables.

    Uses Tr[rho T] <= |T| <= |T^k|^(1/k) <= (coefficient sum of T^k)^(1/k); the
    k-th root is avoided by comparing the sum itself with one.
    """
    s = coeff_abs_sum(nc_pow(from_matrix(matrix), k))
    return SafetyVerdict(s, k, s <= 1)
