"""Enumeration of deterministic protocols and their extreme points."""
from __future__ import annotations

import itertools
from typing import Iterator

from .core import (CommModel, DetProtocol, Pattern, Picture, PointList, Scenario,
                   protocol_table, table_to_vector, to_correlation)
from .errors import EnumerationCapError

DEFAULT_CAP = 10 ** 7


def protocol_count(s: Scenario) -> int:
    M, K = s.M, s.K
    model = s.comm_model
    if model is CommModel.LOCAL:
        return K ** (2 * M)
    if model is CommModel.ONE_BIT:
        return 2 * K ** M * 2 ** M * K ** (2 * M)
    return K ** (2 * M * M)


def _functions(domain_size: int, codomain: int) -> Iterator[tuple]:
    return itertools.product(range(codomain), repeat=domain_size)


def _reshape(flat, rows, cols):
    return tuple(tuple(flat[r * cols:(r + 1) * cols]) for r in range(rows))


def iter_protocols(s: Scenario, cap: int = DEFAULT_CAP) -> Iterator[DetProtocol]:
    """Lazily yield every deterministic protocol allowed by the scenario."""
    n = protocol_count(s)
    if n > cap:
        raise EnumerationCapError(f"{n} protocols exceed the enumeration cap {cap}")
    M, K = s.M, s.K
    model = s.comm_model
    if model is CommModel.LOCAL:
        for alpha, beta in itertools.product(_functions(M, K), repeat=2):
            yield DetProtocol(s, Pattern.NO_COMM, alpha, beta)
    elif model is CommModel.ONE_BIT:
        for local, msg, recv in itertools.product(_functions(M, K), _functions(M, 2), _functions(2 * M, K)):
            yield DetProtocol(s, Pattern.A_TO_B, local, _reshape(recv, 2, M), msg)
        for local, msg, recv in itertools.product(_functions(M, K), _functions(M, 2), _functions(2 * M, K)):
            yield DetProtocol(s, Pattern.B_TO_A, _reshape(recv, 2, M), local, msg)
    else:
        for alpha, beta in itertools.product(_functions(M * M, K), repeat=2):
            yield DetProtocol(s, Pattern.FULL, _reshape(alpha, M, M), _reshape(beta, M, M))


def enumerate_protocols(s: Scenario, cap: int = DEFAULT_CAP) -> list[DetProtocol]:
    return list(iter_protocols(s, cap))


def _point(d: DetProtocol, picture: Picture) -> tuple[int, ...]:
    # protocols are deterministic, so coordinates are read off the outputs directly
    s = d.scenario
    K = s.K
    out = []
    if picture is Picture.PROBABILITY:
        for i, j in s.contexts():
            ab = d.outputs(i, j)
            for a in range(K):
                for b in range(K):
                    if (a, b) != (K - 1, K - 1):
                        out.append(int((a, b) == ab))
    else:
        for i, j in s.contexts():
            a, b = d.outputs(i, j)
            out.append((1 - 2 * a) * (1 - 2 * b))
    return tuple(out)


def vertex_set(s: Scenario, picture: Picture | str = Picture.PROBABILITY, cap: int = DEFAULT_CAP) -> PointList:
    """Distinct points of all deterministic protocols, canonically sorted."""
    picture = Picture(picture)
    if picture is Picture.CORRELATION and s.K != 2:
        raise ValueError("correlation picture needs K = 2")
    points = {_point(d, picture) for d in iter_protocols(s, cap)}
    return PointList(picture, s, tuple(points))


def protocol_point(d: DetProtocol, picture: Picture | str = Picture.PROBABILITY) -> tuple:
    """Same point as :func:`_point`, but routed through the exact table types."""
    t = protocol_table(d)
    if Picture(picture) is Picture.PROBABILITY:
        return table_to_vector(t).coords
    return to_correlation(t).coords
