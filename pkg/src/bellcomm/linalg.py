"""Exact linear algebra over the rationals.

Matrices are lists of rows; entries may be ``int`` or ``Fraction``.  Nothing
here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

Matrix = Sequence[Sequence[Fraction]]


def rref(rows: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot column of each nonzero row."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(a)) if a[k][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for k in range(len(a)):
            if k != r and a[k][c] != 0:
                f = a[k][c]
                a[k] = [x - f * y for x, y in zip(a[k], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Matrix) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : rows @ x = 0}, one vector per free column."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def inverse(rows: Matrix) -> list[list[Fraction]]:
    n = len(rows)
    aug = [list(row) + [Fraction(int(i == k)) for k in range(n)] for i, row in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def integer_scale(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive rational multiple of ``vec`` with coprime integer entries."""
    fr = [Fraction(x) for x in vec]
    den = reduce(lambda x, y: x * y // gcd(x, y), (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, ints, 0)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = reduce(gcd, vec, 0)
    if g > 1:
        return tuple(x // g for x in vec)
    return tuple(vec)


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))
