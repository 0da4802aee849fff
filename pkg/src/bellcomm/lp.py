"""Phase-one simplex over the rationals (Bland's rule, dense tableau)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def phase_one(A: Sequence[Sequence], b: Sequence):
    """Decide feasibility of ``A lam = b, lam >= 0``.

    Returns ``(True, lam)`` or ``(False, y)`` with ``y . A[:, j] <= 0`` for every
    column and ``y . b > 0`` (a Farkas certificate).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    signs = [1 if Fraction(bi) >= 0 else -1 for bi in b]
    # columns 0..n-1 real, n..n+m-1 artificial, last column rhs
    T = []
    for i in range(m):
        s = signs[i]
        row = [s * Fraction(x) for x in A[i]]
        row += [Fraction(int(k == i)) for k in range(m)]
        row.append(s * Fraction(b[i]))
        T.append(row)
    basis = [n + i for i in range(m)]
    cost = [-sum((T[i][j] for i in range(m)), Fraction(0)) for j in range(n)]
    cost += [Fraction(0)] * m
    cost.append(-sum((T[i][-1] for i in range(m)), Fraction(0)))

    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # cannot happen in phase one: objective is bounded below by zero
            raise RuntimeError("phase-one LP reported unbounded")
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[leave])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, T[leave])]
        basis[leave] = enter

    if -cost[-1] == 0:
        lam = [Fraction(0)] * n
        for i, v in enumerate(basis):
            if v < n:
                lam[v] = T[i][-1]
        return True, lam
    # duals of the sign-flipped system: y_f[k] = 1 - reduced cost of artificial k
    y = [signs[k] * (1 - cost[n + k]) for k in range(m)]
    return False, y


def feasible_convex_combination(points: Sequence[Sequence[Fraction]], x: Sequence[Fraction]):
    """Weights ``lam >= 0``, ``sum lam = 1``, ``sum lam_k points[k] = x``.

    On failure returns ``(False, (y0, y))`` with ``y0 + y . v <= 0`` for every
    point ``v`` and ``y0 + y . x > 0``.
    """
    n = len(x)
    A = [[Fraction(1)] * len(points)]
    A += [[p[k] for p in points] for k in range(n)]
    b = [Fraction(1)] + list(x)
    ok, data = phase_one(A, b)
    if ok:
        return True, data
    return False, (data[0], data[1:])
