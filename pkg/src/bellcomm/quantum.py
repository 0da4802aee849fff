"""Random quantum states and +-1 observables as a numerical falsification probe.

Randomness comes from ``numpy.random.default_rng`` (PCG64); trial ``t`` of a
stress test is seeded with ``seed_base + t``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import LinearInequality

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10
SPECTRUM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def check(self) -> None:
        rho = self.entries
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > TRACE_TOL:
            raise ValueError("density matrix trace is not one")
        if np.min(np.linalg.eigvalsh(rho)) < PSD_TOL:
            raise ValueError("density matrix is not positive semidefinite")


@dataclass(frozen=True, eq=False)
class PMObservable:
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def check(self) -> None:
        o = self.entries
        if np.max(np.abs(o - o.conj().T)) > HERMITIAN_TOL:
            raise ValueError("observable is not Hermitian")
        ev = np.linalg.eigvalsh(o)
        if np.min(np.abs(np.abs(ev) - 1)) > SPECTRUM_TOL:
            raise ValueError("observable spectrum is not +-1")


def _ginibre(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(_ginibre(rng, n))
    d = np.diag(r)
    return q * (d / np.abs(d))


def _state(rng: np.random.Generator, n: int) -> DensityMatrix:
    g = _ginibre(rng, n)
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho / np.trace(rho).real)


def _observable(rng: np.random.Generator, n: int) -> PMObservable:
    n_plus = int(rng.integers(1, n))
    d = np.array([1.0] * n_plus + [-1.0] * (n - n_plus))
    u = _haar_unitary(rng, n)
    o = (u * d) @ u.conj().T
    return PMObservable((o + o.conj().T) / 2)


def _check_dim(n: int) -> None:
    if n < 2:
        raise ValueError(f"local dimension must be >= 2, got {n}")


def sample_state(dim_a: int, dim_b: int, seed: int) -> DensityMatrix:
    """Mixed state G G^dagger / Tr on the tensor product, G complex Gaussian."""
    _check_dim(dim_a)
    _check_dim(dim_b)
    return _state(np.random.default_rng(seed), dim_a * dim_b)


def sample_observable(dim: int, seed: int) -> PMObservable:
    """Haar-random rotation of a diagonal +-1 matrix holding both signs."""
    _check_dim(dim)
    return _observable(np.random.default_rng(seed), dim)


def _mat(x):
    return x.entries if isinstance(x, (DensityMatrix, PMObservable)) else np.asarray(x)


def quantum_correlation(rho, A: Sequence, B: Sequence) -> np.ndarray:
    """c[i, j] = Tr[rho (A_i (x) B_j)]."""
    rho = _mat(rho)
    A = [_mat(a) for a in A]
    B = [_mat(b) for b in B]
    if len(A) != len(B):
        raise ValueError("both parties need the same number of observables")
    da, db = A[0].shape[0], B[0].shape[0]
    if rho.shape != (da * db, da * db):
        raise ValueError(f"state of shape {rho.shape} does not match {da}x{db} observables")
    r4 = rho.reshape(da, db, da, db)
    # Tr[rho (A (x) B)] = sum rho[(x,y),(u,v)] A[u,x] B[v,y]
    c = np.einsum("xyuv,iux,jvy->ij", r4, np.stack(A), np.stack(B))
    if np.max(np.abs(c.imag)) > 1e-10:
        raise ValueError("correlation has a non-negligible imaginary part")
    return c.real


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def singlet() -> np.ndarray:
    psi = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
    return np.outer(psi, psi.conj())


def singlet_chsh_correlation() -> np.ndarray:
    """Singlet with A in {Z, X} and B in {(Z+X)/sqrt2, (Z-X)/sqrt2}."""
    A = [PAULI_Z, PAULI_X]
    B = [(PAULI_Z + PAULI_X) / np.sqrt(2), (PAULI_Z - PAULI_X) / np.sqrt(2)]
    return quantum_correlation(singlet(), A, B)


def inequality_arrays(ineqs: Sequence[LinearInequality]) -> tuple[np.ndarray, np.ndarray]:
    F = np.array([[float(x) for x in q.coeffs] for q in ineqs])
    b = np.array([float(q.bound) for q in ineqs])
    return F, b


def margins(ineqs: Sequence[LinearInequality], corr: np.ndarray) -> np.ndarray:
    F, b = inequality_arrays(ineqs)
    return F @ np.asarray(corr).ravel() - b


@dataclass(frozen=True)
class StressReport:
    trials: int
    dims: tuple
    seed_base: int
    tol: float
    max_margin: float | None
    argmax_trial: int | None
    argmax_inequality: int | None

    @property
    def passed(self) -> bool:
        return self.max_margin is None or self.max_margin <= self.tol

    def to_json(self) -> dict:
        return {
            "trials": self.trials, "dims": list(self.dims), "seed": self.seed_base, "tol": self.tol,
            "maxMargin": self.max_margin, "argmaxTrial": self.argmax_trial,
            "argmaxInequality": self.argmax_inequality, "pass": self.passed,
        }


def trial_correlation(trial_seed: int, dim_a: int, dim_b: int, M: int) -> np.ndarray:
    rng = np.random.default_rng(trial_seed)
    rho = _state(rng, dim_a * dim_b)
    A = [_observable(rng, dim_a) for _ in range(M)]
    B = [_observable(rng, dim_b) for _ in range(M)]
    return quantum_correlation(rho, A, B)


def stress_test(ineqs: Sequence[LinearInequality], trials: int, dims: Sequence[int] = (2, 3, 4),
                seed_base: int = 0, tol: float = 1e-9) -> StressReport:
    """Largest margin of any inequality over ``trials`` sampled quantum models.

    Trial ``t`` uses local dimensions ``dims[t % L]`` and ``dims[(t // L) % L]``.
    """
    ineqs = list(ineqs)
    dims = tuple(int(d) for d in dims)
    for d in dims:
        _check_dim(d)
    if trials <= 0:
        return StressReport(0, dims, seed_base, tol, None, None, None)
    n = len(ineqs[0].coeffs)
    M = int(round(n ** 0.5))
    if M * M != n:
        raise ValueError("stress test needs correlation-picture inequalities")
    F, b = inequality_arrays(ineqs)
    L = len(dims)
    best = (-np.inf, None, None)
    for t in range(trials):
        c = trial_correlation(seed_base + t, dims[t % L], dims[(t // L) % L], M)
        m = F @ c.ravel() - b
        k = int(np.argmax(m))
        if m[k] > best[0]:
            best = (float(m[k]), t, k)
    return StressReport(trials, dims, seed_base, tol, *best)
