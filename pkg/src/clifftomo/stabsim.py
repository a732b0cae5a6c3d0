"""Stabilizer-state execution of the twin-C and Choi/Bell circuits.

Register convention for the two-register circuits: register A is qubits
``0..n-1``, register B is ``n..2n-1``, and Bell pair ``r`` joins qubits
``r`` and ``n + r``.

Only deterministic Z-basis readout is supported. Gate functions update the
state in place and return it.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import _kernels
from .clifford import CNOT, CliffordTableau, Gate, GateSeq, H, apply_gate_rows, gate_program
from .f2la import F2Vec, nwords, pack_rows, unpack_rows
from .pauli import SignedPauli


class NondeterministicOutcome(RuntimeError):
    """Z-basis measurement of the state would be random."""


class StabState:
    """k stabilizer generators on k qubits, packed as Pauli rows."""

    __slots__ = ("k", "z", "x", "ph")

    def __init__(self, z: np.ndarray, x: np.ndarray, ph: np.ndarray, k: int):
        self.k = k
        self.z, self.x, self.ph = z, x, ph

    @classmethod
    def from_generators(cls, gens) -> StabState:
        gens = list(gens)
        k = len(gens)
        if k == 0 or any(g.n != k for g in gens):
            raise ValueError("need k generators on k qubits")
        z = np.stack([g.a.words for g in gens]).astype(np.uint64)
        x = np.stack([g.b.words for g in gens]).astype(np.uint64)
        ph = np.array([g.phase for g in gens], dtype=np.uint8)
        return cls(z, x, ph, k)

    @property
    def gens(self) -> list[SignedPauli]:
        k = self.k
        return [SignedPauli(F2Vec(self.z[r], k), F2Vec(self.x[r], k), int(self.ph[r])) for r in range(k)]

    def copy(self) -> StabState:
        return StabState(self.z.copy(), self.x.copy(), self.ph.copy(), self.k)

    def check(self):
        """Raise ValueError unless generators are Hermitian, commuting and independent."""
        if np.any(self.ph & 1):
            raise ValueError("generator with non-Hermitian phase")
        a = unpack_rows(self.z, self.k).astype(np.int64)
        b = unpack_rows(self.x, self.k).astype(np.int64)
        form = (a @ b.T + b @ a.T) & 1
        if form.any():
            raise ValueError("generators do not commute")
        stacked = np.concatenate([a, b], axis=1).astype(np.uint8)
        rank = _kernels.row_reduce_signed(
            pack_rows(stacked, 2 * self.k), np.zeros(self.k, dtype=np.uint8), 2 * self.k
        )
        if rank != self.k:
            raise ValueError("generators are not independent")

    def __repr__(self) -> str:
        return f"StabState({', '.join(map(str, self.gens))})"


class StabSlot(NamedTuple):
    """Where an oracle query lands: a state and the qubits it acts on."""

    state: StabState
    register: tuple[int, ...]


def init_basis(bits: F2Vec) -> StabState:
    """Computational basis state: generator r is (-1)^bits_r Z_r."""
    k = len(bits)
    if k == 0:
        raise ValueError("cannot prepare a zero-qubit state")
    z = pack_rows(np.eye(k, dtype=np.uint8), k)
    x = np.zeros((k, nwords(k)), dtype=np.uint64)
    ph = (2 * bits.to_array()).astype(np.uint8)
    return StabState(z, x, ph, k)


def _qubit(state, q):
    if not 0 <= q < state.k:
        raise IndexError(f"qubit {q} out of range for {state.k} qubits")
    return q


def apply_h(state: StabState, qubit: int) -> StabState:
    _kernels.rows_h(state.z, state.x, state.ph, _qubit(state, qubit))
    return state


def apply_s(state: StabState, qubit: int) -> StabState:
    _kernels.rows_s(state.z, state.x, state.ph, _qubit(state, qubit))
    return state


def apply_cnot(state: StabState, control: int, target: int) -> StabState:
    if control == target:
        raise ValueError("CNOT control and target must differ")
    _kernels.rows_cnot(state.z, state.x, state.ph, _qubit(state, control), _qubit(state, target))
    return state


def apply_gate(state: StabState, gate: Gate, offset: int = 0) -> StabState:
    for q in gate.qubits:
        _qubit(state, q + offset)
    apply_gate_rows(state.z, state.x, state.ph, gate, offset)
    return state


def apply_gates(state: StabState, gates: GateSeq, offset: int = 0) -> StabState:
    if offset < 0 or offset + gates.n > state.k:
        raise IndexError("gate sequence does not fit the state at this offset")
    prog = gates.program
    if offset:
        prog = prog.copy()
        prog[:, 1:] += offset
    _kernels.rows_program(state.z, state.x, state.ph, prog)
    return state


def _register(state: StabState, register, n: int) -> int:
    register = tuple(register)
    if len(register) != n:
        raise ValueError(f"register has {len(register)} qubits, operator acts on {n}")
    if len(set(register)) != n:
        raise ValueError("register qubits overlap")
    start = register[0]
    if register != tuple(range(start, start + n)):
        raise ValueError("register must be a contiguous ascending qubit range")
    if start < 0 or start + n > state.k:
        raise IndexError("register out of range")
    return start


def apply_clifford_oracle(state: StabState, t: CliffordTableau, register) -> StabState:
    """Conjugate each generator's restriction to ``register`` by ``t``."""
    offset = _register(state, register, t.n)
    _kernels.rows_conjugate(state.z, state.x, state.ph, offset, t.n, *t.rows)
    return state


def apply_pauli(state: StabState, p: SignedPauli, register) -> StabState:
    """Apply a Pauli on ``register``: flips generators that anticommute with it."""
    offset = _register(state, register, p.n)
    for q in np.flatnonzero(p.b.to_array()):  # X part flips Z-supported rows
        _kernels.rows_x(state.z, state.x, state.ph, offset + int(q))
    for q in np.flatnonzero(p.a.to_array()):
        _kernels.rows_z(state.z, state.x, state.ph, offset + int(q))
    return state


def measure_all_z_deterministic(state: StabState) -> F2Vec:
    """Read the Z-basis outcome of a state that is a Z eigenstate.

    Bit r is 1 iff -Z_r is in the stabilizer group, found by signed
    elimination on the Z parts.
    """
    if state.x.any():
        raise NondeterministicOutcome("a generator has X support; outcome is random")
    if np.any(state.ph & 1):
        raise ValueError("generator with non-Hermitian phase")
    work = state.z.copy()
    signs = (state.ph >> 1).astype(np.uint8)
    rank = _kernels.row_reduce_signed(work, signs, state.k)
    if rank != state.k:
        raise ValueError("generators are not independent")
    return F2Vec.from_bits(signs)


def _query(target, state: StabState, register):
    if isinstance(target, CliffordTableau):
        apply_clifford_oracle(state, target, register)
    elif isinstance(target, SignedPauli):
        apply_pauli(state, target, register)
    else:
        target.apply(StabSlot(state, tuple(register)))


@lru_cache(maxsize=None)
def _bell_programs(n: int):
    prep = [H(r) for r in range(n)] + [CNOT(r, n + r) for r in range(n)]
    unprep = [CNOT(r, n + r) for r in range(n)] + [H(r) for r in range(n)]
    return gate_program(prep), gate_program(unprep)


def _bell_entangle(state: StabState, n: int):
    _kernels.rows_program(state.z, state.x, state.ph, _bell_programs(n)[0])


def _bell_disentangle(state: StabState, n: int):
    _kernels.rows_program(state.z, state.x, state.ph, _bell_programs(n)[1])


def run_twin_c(target, j: F2Vec) -> F2Vec:
    """Run the twin circuit: Bell prep from ``|j>``, query both registers, Bell readout.

    ``target`` is a CliffordTableau or an oracle exposing ``apply(StabSlot)``;
    an oracle is queried exactly twice.
    """
    n = target.n
    if len(j) != 2 * n:
        raise ValueError(f"input must have {2 * n} bits")
    state = init_basis(j)
    _bell_entangle(state, n)
    _query(target, state, range(n))
    _query(target, state, range(n, 2 * n))
    _bell_disentangle(state, n)
    return measure_all_z_deterministic(state)


def run_choi(target, correction: GateSeq | None = None) -> F2Vec:
    """Query ``target`` once on register B of a Bell pair, optionally follow
    with ``correction`` on B, and measure in the Bell basis.

    Returns ``(a; b)`` of the effective Pauli on register B.
    """
    n = target.n
    state = init_basis(F2Vec.zeros(2 * n))
    _bell_entangle(state, n)
    _query(target, state, range(n, 2 * n))
    if correction is not None:
        apply_gates(state, correction, offset=n)
    _bell_disentangle(state, n)
    return measure_all_z_deterministic(state)


def run_choi_pauli(p: SignedPauli) -> F2Vec:
    """Identify a Pauli up to phase from one query: returns its ``(a; b)``."""
    if not p.is_hermitian():
        raise ValueError("Pauli must have a real sign")
    return run_choi(p)


__all__ = [
    "NondeterministicOutcome",
    "StabSlot",
    "StabState",
    "apply_clifford_oracle",
    "apply_cnot",
    "apply_gate",
    "apply_gates",
    "apply_h",
    "apply_pauli",
    "apply_s",
    "init_basis",
    "measure_all_z_deterministic",
    "run_choi",
    "run_choi_pauli",
    "run_twin_c",
]
