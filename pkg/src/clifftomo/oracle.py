"""Query-counted unknown unitaries.

An :class:`Oracle` wraps either an exact Clifford tableau or a dense
unitary and counts every application. Learners only touch the unitary
through the methods here.
"""

from __future__ import annotations

import math
import threading
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import densesim
from .clifford import CliffordTableau, to_matrix
from .densesim import DenseUnitary
from .f2la import F2Vec
from .pauli import DENSE_LIMIT, DenseLimitError, SignedPauli
from .stabsim import StabSlot, apply_clifford_oracle

# uniqueness radius of the closest Clifford
CLIFFORD_RADIUS = math.sqrt(2) / 4


class BackendMismatch(TypeError):
    """An oracle was applied in a circuit its backend cannot serve."""


@dataclass
class DenseSlot:
    """A dense register the oracle acts on; ``matrix`` accumulates left products."""

    matrix: np.ndarray


@dataclass(eq=False)
class Oracle:
    n: int
    tableau: CliffordTableau | None = None
    dense: DenseUnitary | None = None
    _queries: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if (self.tableau is None) == (self.dense is None):
            raise ValueError("an oracle needs exactly one backend")

    @property
    def backend(self) -> str:
        return "tableau" if self.tableau is not None else "dense"

    @property
    def queries(self) -> int:
        return self._queries

    def _charge(self, count: int):
        with self._lock:
            self._queries += count

    def reset(self):
        with self._lock:
            self._queries = 0

    def _dense_matrix(self) -> np.ndarray:
        if self.dense is not None:
            return self.dense.matrix
        if self.n > DENSE_LIMIT:
            raise BackendMismatch(f"tableau oracle on {self.n} qubits has no dense form")
        return to_matrix(self.tableau).matrix

    def apply(self, context):
        """Apply the unitary once to ``context`` and count one query."""
        if isinstance(context, StabSlot):
            if self.tableau is None:
                raise BackendMismatch("dense oracle cannot act on a stabilizer state")
            apply_clifford_oracle(context.state, self.tableau, context.register)
        elif isinstance(context, DenseSlot):
            context.matrix = self._dense_matrix() @ context.matrix
        else:
            raise BackendMismatch(f"unsupported query context {type(context).__name__}")
        self._charge(1)
        return context

    def sample_twin(self, j: F2Vec, rng: np.random.Generator, shots: int) -> Counter:
        """``shots`` runs of the twin-U circuit on input ``j``; two queries each."""
        u = DenseUnitary(self._dense_matrix())
        counts = densesim.twin_u_sample(u, j, rng, shots)
        self._charge(2 * shots)
        return counts

    def sample_choi(self, rng: np.random.Generator, shots: int, after: np.ndarray | None = None) -> Counter:
        """``shots`` Bell readouts of the Choi state of ``after @ U``; one query each."""
        if shots < 1:
            raise ValueError("shots must be >= 1")
        mat = self._dense_matrix()
        if after is not None:
            mat = after @ mat
        counts = densesim.sample(densesim.choi_pauli_distribution(DenseUnitary(mat)), rng, shots)
        self._charge(shots)
        return counts


def make_clifford_oracle(t: CliffordTableau) -> Oracle:
    return Oracle(t.n, tableau=t)


def make_dense_oracle(u: DenseUnitary) -> Oracle:
    return Oracle(u.n, dense=u)


def make_perturbed_clifford(t: CliffordTableau, eps: float, rng: np.random.Generator):
    """Planted Clifford times exp(-i theta P), sin(theta) = eps, P a random non-identity Pauli.

    Returns ``(oracle, U)``; D(U, C) = eps exactly up to rounding.
    """
    if t.n > DENSE_LIMIT:
        raise DenseLimitError(f"dense oracles limited to {DENSE_LIMIT} qubits, got {t.n}")
    if not 0 <= eps < CLIFFORD_RADIUS:
        raise ValueError(f"eps must lie in [0, {CLIFFORD_RADIUS:.6f}), got {eps}")
    n = t.n
    label = int(rng.integers(1, 4**n))
    bits = F2Vec.from_int(label, 2 * n).to_array()
    p = SignedPauli(F2Vec.from_bits(bits[:n]), F2Vec.from_bits(bits[n:]))
    u = to_matrix(t) @ densesim.pauli_rotation(p, math.asin(eps))
    return make_dense_oracle(u), u
