"""Monte Carlo run of the setting-transmission protocol.

For a table whose sender marginal ignores the receiver's setting, the sender
outputs a shared sample from its marginal and transmits its setting; the
receiver samples conditionally on that output.  Sampling uses
``numpy.random.default_rng`` seeded with ``seed`` for context 0 and
``seed + n`` for the n-th context in (i, j) order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (Direction, ProbTable, Scenario, one_way_no_signaling, outcome_value,
                   validate_prob_table)
from .errors import InvalidTableError, SignalingError


def message_bits(M: int) -> int:
    """Bits needed to transmit a setting in range(M)."""
    return (M - 1).bit_length()


def encode_setting(i: int, M: int) -> str:
    """Fixed-width big-endian encoding of a setting."""
    width = message_bits(M)
    return format(i, f"0{width}b") if width else ""


def decode_setting(bits: str) -> int:
    return int(bits, 2) if bits else 0


@dataclass(frozen=True, eq=False)
class SimulationRun:
    target: ProbTable
    direction: Direction
    samples: int
    seed: int
    counts: np.ndarray  # counts[i, j, a, b]
    message_bits: int

    def empirical(self) -> np.ndarray:
        return self.counts / self.samples

    def to_json(self) -> dict:
        s = self.target.scenario
        return {
            "direction": self.direction.value,
            "samples": self.samples,
            "seed": self.seed,
            "messageBits": self.message_bits,
            "counts": {f"{i},{j}": self.counts[i, j].tolist() for i, j in s.contexts()},
            "tv": tv_distance(self),
        }


def _check(target: ProbTable, direction: Direction) -> None:
    report = validate_prob_table(target)
    if not report.valid:
        raise InvalidTableError("target table is not a valid distribution")
    ok, witness = one_way_no_signaling(target, direction)
    if not ok:
        raise SignalingError(f"table signals against direction {direction.value}", witness)


def _sender_marginal(target: ProbTable, direction: Direction, s: int) -> list[Fraction]:
    # independent of the receiver's setting by precondition; read it at setting 0
    K = target.scenario.K
    if direction is Direction.A_TO_B:
        return [target.marginal_a(x, s, 0) for x in range(K)]
    return [target.marginal_b(x, 0, s) for x in range(K)]


def _joint(target: ProbTable, direction: Direction, i, j, x, y) -> Fraction:
    """p(sender outputs x, receiver outputs y) in context (i, j)."""
    if direction is Direction.A_TO_B:
        return target[x, y, i, j]
    return target[y, x, i, j]


def branch_probabilities(target: ProbTable, direction: Direction | str = Direction.A_TO_B) -> ProbTable:
    """Exact probability of each (a, b) in one protocol round, per context.

    Computed from the two-stage draw: sender marginal, then receiver
    conditional; branches with zero sender marginal are never taken.
    """
    direction = Direction(direction)
    _check(target, direction)
    s = target.scenario
    K = s.K
    out = {}
    for i, j in s.contexts():
        send = i if direction is Direction.A_TO_B else j
        marg = _sender_marginal(target, direction, send)
        for x in range(K):
            for y in range(K):
                if marg[x] == 0:
                    prob = Fraction(0)
                else:
                    prob = marg[x] * (_joint(target, direction, i, j, x, y) / marg[x])
                key = (x, y) if direction is Direction.A_TO_B else (y, x)
                out[key + (i, j)] = prob
    return ProbTable.from_function(s, lambda a, b, i, j: out[a, b, i, j])


def simulate(target: ProbTable, direction: Direction | str = Direction.A_TO_B,
             samples: int = 10_000, seed: int = 0) -> SimulationRun:
    direction = Direction(direction)
    _check(target, direction)
    s = target.scenario
    M, K = s.M, s.K
    bits = message_bits(M)
    counts = np.zeros((M, M, K, K), dtype=np.int64)
    for n, (i, j) in enumerate(s.contexts()):
        rng = np.random.default_rng(seed + n)
        send, recv = (i, j) if direction is Direction.A_TO_B else (j, i)
        marg = _sender_marginal(target, direction, send)
        # shared variable for the sender's setting
        x = rng.choice(K, size=samples, p=[float(v) for v in marg])
        heard = decode_setting(encode_setting(send, M))
        i2, j2 = (heard, recv) if direction is Direction.A_TO_B else (recv, heard)
        y = np.empty(samples, dtype=np.int64)
        for xv in range(K):
            mask = x == xv
            k = int(mask.sum())
            if k == 0:
                continue
            # marg[xv] > 0 whenever xv was drawn
            cond = [float(_joint(target, direction, i2, j2, xv, yv) / marg[xv]) for yv in range(K)]
            y[mask] = rng.choice(K, size=k, p=cond)
        a, b = (x, y) if direction is Direction.A_TO_B else (y, x)
        np.add.at(counts[i, j], (a, b), 1)
    return SimulationRun(target, direction, samples, seed, counts, bits)


def tv_distance(run: SimulationRun) -> float:
    """Largest per-context total variation distance to the target."""
    s = run.target.scenario
    target = np.array([[[[float(run.target[a, b, i, j]) for b in range(s.K)] for a in range(s.K)]
                        for j in range(s.M)] for i in range(s.M)])
    emp = run.empirical()
    return float(max(0.5 * np.abs(emp[i, j] - target[i, j]).sum() for i, j in s.contexts()))


def singlet_like_table(c: Fraction = Fraction(7, 10)) -> ProbTable:
    """M = K = 2 table with uniform marginals and correlations (c, c, c, -c)."""
    s = Scenario(2, 2, 1)
    signs = {(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): -1}
    c = Fraction(c)
    return ProbTable.from_function(
        s, lambda a, b, i, j: (1 + signs[i, j] * c * outcome_value(a) * outcome_value(b)) / 4)

