"""Clifford and Pauli learners built on the twin and Choi/Bell circuits.

Exact regime (tableau oracle):

1. Run the twin circuit on ``J_0 = 0`` and on each unit vector ``e_i``.
   The outcome is affine in the input, so ``K_i ^ K_0`` is column ``i``
   of the symplectic matrix.
2. Undo the unsigned Clifford with that symplectic part and read the
   leftover Pauli ``P(h, f)`` from one Bell measurement.

That costs ``2 (2n + 1) + 1 = 4n + 3`` queries. The noisy regime repeats
each circuit and takes plurality votes, with repetition counts from a
Hoeffding bound.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .clifford import CliffordTableau, compile, inverse, to_matrix
from .f2la import F2Mat, F2Vec, SymplecticMat, SymplecticViolation
from .oracle import CLIFFORD_RADIUS, Oracle
from .stabsim import run_choi, run_twin_c

PAULI_RADIUS = math.sqrt(2) / 2
RNG_NAME = "numpy.Philox"


@dataclass(frozen=True)
class LearnParams:
    """Promise ``D(U, C) <= eps`` and overall failure budget ``delta``."""

    eps: float
    delta: float
    radius: float = CLIFFORD_RADIUS

    def __post_init__(self):
        if not 0 <= self.eps < self.radius:
            raise ValueError(f"eps must lie in [0, {self.radius:.6f}), got {self.eps}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")

    @classmethod
    def for_pauli(cls, eps: float, delta: float) -> LearnParams:
        return cls(eps, delta, PAULI_RADIUS)

    def task_delta(self, n: int) -> float:
        return self.delta / (2 * n + 2)

    def stage_sizes(self, n: int) -> tuple[int, int]:
        """``(N1, N2)``: repetitions per twin input and for the Bell readout."""
        td = self.task_delta(n)
        return (
            hoeffding_samples(td, 0.5 - 4 * self.eps**2),
            hoeffding_samples(td, 0.5 - self.eps**2),
        )

    def predicted_queries(self, n: int) -> int:
        n1, n2 = self.stage_sizes(n)
        return 2 * (2 * n + 1) * n1 + n2


@dataclass(frozen=True)
class TwinRecord:
    j: F2Vec
    k: F2Vec
    counts: Counter

    @property
    def unanimous(self) -> bool:
        return len(self.counts) == 1


@dataclass
class LearnReport:
    recovered: CliffordTableau | None
    queries: int
    success: bool
    n1: int = 1
    n2: int = 1
    seed: int | None = None
    records: list[TwinRecord] = field(default_factory=list)
    readout: TwinRecord | None = None
    failure: str | None = None

    @property
    def unanimous(self) -> bool:
        recs = self.records + ([self.readout] if self.readout is not None else [])
        return all(r.unanimous for r in recs)


def hoeffding_samples(task_delta: float, margin: float) -> int:
    """Odd repetition count N with ``2 exp(-2 N margin^2) <= task_delta``."""
    if margin <= 0:
        raise ValueError(f"margin must be positive, got {margin}; eps is past the learnable radius")
    if not 0 < task_delta < 1:
        raise ValueError(f"task_delta must lie in (0, 1), got {task_delta}")
    n = math.ceil(math.log(2 / task_delta) / (2 * margin**2))
    return n + 1 if n % 2 == 0 else n


def majority(counts) -> F2Vec:
    """Plurality winner; ties go to the lexicographically smallest bit string."""
    if not counts:
        raise ValueError("empty histogram")
    return min(counts.items(), key=lambda kv: (-kv[1], str(kv[0])))[0]


def _basis_inputs(n: int) -> list[F2Vec]:
    return [F2Vec.zeros(2 * n)] + [F2Vec.unit(2 * n, i) for i in range(2 * n)]


def _assemble(ks: list[F2Vec]) -> SymplecticMat:
    """Columns ``K_i ^ K_0``; raises SymplecticViolation if not symplectic."""
    k0 = ks[0]
    return SymplecticMat(F2Mat.from_columns(k ^ k0 for k in ks[1:]))


def _signed(s: SymplecticMat, readout: F2Vec) -> CliffordTableau:
    n = s.n
    bits = readout.to_array()
    # the Bell readout of Ctilde^dag C is the label (h; f) of P(h, f)
    return CliffordTableau(s, F2Vec.from_bits(bits[n:]), F2Vec.from_bits(bits[:n]))


def learn_clifford(oracle: Oracle) -> LearnReport:
    """Recover a Clifford oracle up to phase with exactly ``4n + 3`` queries."""
    n = oracle.n
    start = oracle.queries
    records = []
    for j in _basis_inputs(n):
        k = run_twin_c(oracle, j)
        records.append(TwinRecord(j, k, Counter({k: 1})))
    s = _assemble([r.k for r in records])
    unsigned = CliffordTableau(s, F2Vec.zeros(n), F2Vec.zeros(n))
    label = run_choi(oracle, compile(inverse(unsigned)))
    readout = TwinRecord(F2Vec.zeros(2 * n), label, Counter({label: 1}))
    return LearnReport(
        recovered=_signed(s, label),
        queries=oracle.queries - start,
        success=True,
        records=records,
        readout=readout,
    )


def _seed_sequence(seed) -> np.random.SeedSequence:
    return seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(_seed_sequence(seed)))


def _seed_value(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed.entropy
    return seed


def learn_pauli_noisy(oracle: Oracle, params: LearnParams, seed) -> tuple[F2Vec, F2Vec]:
    """Plurality vote over Bell readouts of the Choi state; returns ``(a, b)``."""
    n_samples = hoeffding_samples(params.delta, 0.5 - params.eps**2)
    counts = oracle.sample_choi(make_rng(seed), n_samples)
    label = majority(counts).to_array()
    n = oracle.n
    return F2Vec.from_bits(label[:n]), F2Vec.from_bits(label[n:])


def learn_clifford_noisy(oracle: Oracle, params: LearnParams, seed) -> LearnReport:
    """Closest-Clifford learner for a unitary within ``params.eps`` of a Clifford.

    Each of the ``2n + 2`` votes draws from its own Philox stream spawned
    from ``seed``, so results do not depend on evaluation order. A
    non-symplectic stage-1 vote is reported as a failed run.
    """
    n = oracle.n
    n1, n2 = params.stage_sizes(n)
    streams = _seed_sequence(seed).spawn(2 * n + 2)
    start = oracle.queries
    records = []
    for j, ss in zip(_basis_inputs(n), streams):
        counts = oracle.sample_twin(j, make_rng(ss), n1)
        records.append(TwinRecord(j, majority(counts), counts))
    report = LearnReport(None, 0, False, n1, n2, _seed_value(seed), records)
    try:
        s = _assemble([r.k for r in records])
    except SymplecticViolation as exc:
        report.queries = oracle.queries - start
        report.failure = f"stage 1 votes are not symplectic: {exc}"
        return report
    unsigned = CliffordTableau(s, F2Vec.zeros(n), F2Vec.zeros(n))
    undo = to_matrix(inverse(unsigned)).matrix
    counts = oracle.sample_choi(make_rng(streams[-1]), n2, after=undo)
    label = majority(counts)
    report.readout = TwinRecord(F2Vec.zeros(2 * n), label, counts)
    report.recovered = _signed(s, label)
    report.queries = oracle.queries - start
    report.success = True
    return report


__all__ = [
    "LearnParams",
    "LearnReport",
    "PAULI_RADIUS",
    "RNG_NAME",
    "TwinRecord",
    "hoeffding_samples",
    "learn_clifford",
    "learn_clifford_noisy",
    "learn_pauli_noisy",
    "majority",
    "make_rng",
]
