"""Exact small-n backend for arbitrary unitaries.

Outcome distributions of the twin-U and Choi/Bell circuits are evaluated
from trace formulas over all ``4**n`` Bell outcomes, never by statevector
sampling. Outcomes are indexed by the integer value of the ``2n``-bit label
``(k; l)`` (bit ``q`` is ``k_q``, bit ``n + q`` is ``l_q``).

Tolerances: probabilities below ``-PROB_FLOOR`` are an error and the rest
are clamped at zero, normalization is checked at ``NORM_TOL``, and a
deterministic outcome needs mass of at least ``1 - POINT_MASS_TOL``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .f2la import F2Vec
from .pauli import DENSE_LIMIT, DenseLimitError, SignedPauli, from_label, to_matrix

PROB_FLOOR = 1e-12
NORM_TOL = 1e-9
UNITARY_TOL = 1e-9
POINT_MASS_TOL = 1e-10


class DenseUnitary:
    """A ``2**n x 2**n`` unitary, qubit 0 as the most significant index bit."""

    __slots__ = ("n", "matrix")

    def __init__(self, matrix, n: int | None = None):
        matrix = np.array(matrix, dtype=complex)
        d = matrix.shape[0]
        if matrix.shape != (d, d) or d & (d - 1):
            raise ValueError(f"expected a square power-of-two matrix, got {matrix.shape}")
        n_from = d.bit_length() - 1
        if n is not None and n != n_from:
            raise ValueError(f"matrix is {d}x{d}, not {n} qubits")
        if n_from > DENSE_LIMIT:
            raise DenseLimitError(f"dense backend limited to {DENSE_LIMIT} qubits, got {n_from}")
        if np.abs(matrix.conj().T @ matrix - np.eye(d)).max() > UNITARY_TOL:
            raise ValueError("matrix is not unitary")
        matrix.flags.writeable = False
        self.n = n_from
        self.matrix = matrix

    @property
    def d(self) -> int:
        return 1 << self.n

    def __matmul__(self, other: DenseUnitary) -> DenseUnitary:
        return DenseUnitary(self.matrix @ other.matrix)

    def dagger(self) -> DenseUnitary:
        return DenseUnitary(self.matrix.conj().T)

    def __repr__(self) -> str:
        return f"DenseUnitary(n={self.n})"


@dataclass(frozen=True)
class OutcomeDist:
    n: int
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (4**self.n,):
            raise ValueError("wrong number of outcomes")
        if p.min() < -PROB_FLOOR:
            raise ValueError(f"negative probability {p.min()}")
        p = np.clip(p, 0.0, None)
        if abs(p.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"distribution sums to {p.sum()}")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    def __getitem__(self, outcome: F2Vec | int) -> float:
        idx = outcome.to_int() if isinstance(outcome, F2Vec) else outcome
        return float(self.probs[idx])

    def outcome(self, index: int) -> F2Vec:
        return F2Vec.from_int(index, 2 * self.n)

    def items(self):
        for i in np.flatnonzero(self.probs):
            yield self.outcome(int(i)), float(self.probs[i])

    def mode(self) -> F2Vec:
        return self.outcome(int(np.argmax(self.probs)))

    def is_point_mass(self, outcome: F2Vec) -> bool:
        return self[outcome] >= 1.0 - POINT_MASS_TOL


def _check_n(u: DenseUnitary):
    if u.n > DENSE_LIMIT:
        raise DenseLimitError(f"dense backend limited to {DENSE_LIMIT} qubits")


@lru_cache(maxsize=None)
def _tables(n: int):
    d = 1 << n
    c = np.arange(d)
    had = np.array([[(-1) ** bin(r & s).count("1") for s in range(d)] for r in range(d)], dtype=float)
    # outcome index -> (k mask, l mask) in matrix-index bit order
    kmask = np.zeros(4**n, dtype=np.int64)
    lmask = np.zeros(4**n, dtype=np.int64)
    for o in range(4**n):
        for q in range(n):
            if (o >> q) & 1:
                kmask[o] |= 1 << (n - 1 - q)
            if (o >> (n + q)) & 1:
                lmask[o] |= 1 << (n - 1 - q)
    return c, had, kmask, lmask


def pauli_trace_table(m: np.ndarray, n: int) -> np.ndarray:
    """``|Tr[m P(k, l)]|**2`` for every outcome index.

    Tr[m Z^k X^l] = sum_c m[c, c^l] (-1)^{k.(c^l)}, so for each ``l`` the
    traces over all ``k`` are one Walsh-Hadamard transform.
    """
    c, had, kmask, lmask = _tables(n)
    gathered = m[c[None, :], c[None, :] ^ c[:, None]]  # [l, c] = m[c, c ^ l]
    traces = gathered @ had  # [l, k]
    return np.abs(traces[lmask, kmask]) ** 2


def _pauli_dense(label: F2Vec) -> np.ndarray:
    return to_matrix(from_label(label))


def twin_u_distribution(u: DenseUnitary, j: F2Vec) -> OutcomeDist:
    """Outcome law of the twin-U circuit on input ``j = (i; j)``.

    P(k, l | i, j) = |Tr[U P(i, j) U^T P(k, l)]|^2 / d^2.
    """
    _check_n(u)
    if len(j) != 2 * u.n:
        raise ValueError(f"input must have {2 * u.n} bits")
    m = u.matrix @ _pauli_dense(j) @ u.matrix.T
    return OutcomeDist(u.n, pauli_trace_table(m, u.n) / u.d**2)


def choi_pauli_distribution(u: DenseUnitary) -> OutcomeDist:
    """Bell-measurement law on the Choi state: |Tr[P(k, l) U]|^2 / d^2."""
    _check_n(u)
    return OutcomeDist(u.n, pauli_trace_table(u.matrix, u.n) / u.d**2)


def sample(dist: OutcomeDist, rng: np.random.Generator, shots: int) -> Counter:
    """Draw ``shots`` outcomes by inverse CDF; returns a Counter of F2Vec."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    cdf = np.cumsum(dist.probs)
    idx = np.searchsorted(cdf, rng.random(shots) * cdf[-1], side="right")
    last = int(np.flatnonzero(dist.probs)[-1])
    idx = np.minimum(idx, last)
    values, counts = np.unique(idx, return_counts=True)
    return Counter({dist.outcome(int(v)): int(c) for v, c in zip(values, counts)})


def twin_u_sample(u: DenseUnitary, j: F2Vec, rng: np.random.Generator, shots: int) -> Counter:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    return sample(twin_u_distribution(u, j), rng, shots)


def distance(u1: DenseUnitary, u2: DenseUnitary) -> float:
    """Phase-insensitive distance sqrt(1 - |Tr[U1 U2^dag]|^2 / d^2)."""
    if u1.n != u2.n:
        raise ValueError(f"size mismatch: {u1.n} vs {u2.n} qubits")
    # 1 - |T|^2/d^2 cancels badly near zero. With r the phase-aligned
    # residual ||U1 - e^{i phi} U2||_F^2 / 2d we have |T|/d = 1 - r, so
    # D^2 = r (2 - r) with no subtraction of nearly equal numbers.
    tr = np.vdot(u2.matrix, u1.matrix)  # Tr[U1 U2^dag]
    phase = tr / abs(tr) if abs(tr) > 0 else 1.0
    r = np.linalg.norm(u1.matrix - phase * u2.matrix) ** 2 / (2 * u1.d)
    r = min(1.0, max(0.0, r))
    return float(np.sqrt(r * (2.0 - r)))


def pauli_unitary(p: SignedPauli) -> DenseUnitary:
    return DenseUnitary(to_matrix(p))


def random_unitary(n: int, rng: np.random.Generator) -> DenseUnitary:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    d = 1 << n
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return DenseUnitary(q)


def pauli_rotation(p: SignedPauli, theta: float) -> DenseUnitary:
    """exp(-i theta P) for a Hermitian Pauli P."""
    if not p.is_hermitian():
        raise ValueError("rotation generator must be Hermitian")
    mat = to_matrix(p)
    d = mat.shape[0]
    return DenseUnitary(np.cos(theta) * np.eye(d) - 1j * np.sin(theta) * mat)
