"""Exact n-qubit Pauli group arithmetic.

A :class:`SignedPauli` is ``i**phase * P(a, b)`` where ``P(a, b)`` is the
tensor product of single-qubit labels ``P(0,0)=I, P(0,1)=X, P(1,0)=Z,
P(1,1)=Y``. ``a`` is the Z part and ``b`` the X part. Phases are integers
mod 4; no floating point enters the group law.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import _kernels
from .f2la import F2Vec

DENSE_LIMIT = 6

_I2 = np.eye(2, dtype=complex)
_X2 = np.array([[0, 1], [1, 0]], dtype=complex)
_Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z2 = np.array([[1, 0], [0, -1]], dtype=complex)

# single-qubit matrices indexed by the 2-bit label 2*a + b
SINGLE = (_I2, _X2, _Z2, _Y2)
LETTERS = "IXZY"

# P(l1) P(l2) = i**KAPPA[l1][l2] P(l1 ^ l2), labels as 2*a + b
KAPPA = (
    (0, 0, 0, 0),
    (0, 0, 3, 1),
    (0, 1, 0, 3),
    (0, 3, 1, 0),
)

_PREFIX = {"+": 0, "+i": 1, "-": 2, "-i": 3}
_PREFIX_OUT = {0: "+", 1: "+i", 2: "-", 3: "-i"}


def _dense_kappa():
    # recompute the table from matrix products; tests compare it to KAPPA
    table = []
    for l1 in range(4):
        row = []
        for l2 in range(4):
            prod = SINGLE[l1] @ SINGLE[l2]
            target = SINGLE[l1 ^ l2]
            row.append(next(k for k in range(4) if np.allclose(prod, 1j**k * target)))
        table.append(tuple(row))
    return tuple(table)


class DenseLimitError(ValueError):
    """Dense construction requested above the supported qubit count."""


@dataclass(frozen=True)
class SignedPauli:
    a: F2Vec
    b: F2Vec
    phase: int = 0

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ValueError("Z and X parts must have equal length")
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @property
    def n(self) -> int:
        return len(self.a)

    @classmethod
    def identity(cls, n: int) -> SignedPauli:
        return cls(F2Vec.zeros(n), F2Vec.zeros(n), 0)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str, phase: int = 0) -> SignedPauli:
        label = LETTERS.index(letter)
        a = F2Vec.unit(n, qubit) if label >> 1 else F2Vec.zeros(n)
        b = F2Vec.unit(n, qubit) if label & 1 else F2Vec.zeros(n)
        return cls(a, b, phase)

    @classmethod
    def from_str(cls, text: str) -> SignedPauli:
        text = text.strip()
        prefix = ""
        for p in ("+i", "-i", "+", "-"):
            if text.startswith(p):
                prefix = p
                break
        body = text[len(prefix):]
        if not body or set(body) - set(LETTERS):
            raise ValueError(f"not a Pauli string: {text!r}")
        labels = [LETTERS.index(c) for c in body]
        a = F2Vec.from_bits([l >> 1 for l in labels])
        b = F2Vec.from_bits([l & 1 for l in labels])
        return cls(a, b, _PREFIX.get(prefix, 0))

    def __str__(self) -> str:
        labels = 2 * self.a.to_array() + self.b.to_array()
        return _PREFIX_OUT[self.phase] + "".join(LETTERS[l] for l in labels)

    def __repr__(self) -> str:
        return f"SignedPauli('{self}')"

    def __mul__(self, other: SignedPauli) -> SignedPauli:
        return pauli_mul(self, other)

    def __neg__(self) -> SignedPauli:
        return SignedPauli(self.a, self.b, self.phase + 2)

    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    def label(self) -> F2Vec:
        """The concatenated ``(a; b)`` label."""
        return self.a.concat(self.b)

    def equal_up_to_phase(self, other: SignedPauli) -> bool:
        return self.a == other.a and self.b == other.b

    def to_matrix(self) -> np.ndarray:
        return to_matrix(self)


def _same_size(p: SignedPauli, q: SignedPauli):
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n} qubits")


def pauli_mul(p: SignedPauli, q: SignedPauli) -> SignedPauli:
    _same_size(p, q)
    k = _kernels.pauli_mul_phase(p.a.words, p.b.words, q.a.words, q.b.words)
    return SignedPauli(p.a ^ q.a, p.b ^ q.b, p.phase + q.phase + k)


def pauli_mul_table(p: SignedPauli, q: SignedPauli) -> SignedPauli:
    """Reference product summing :data:`KAPPA` qubit by qubit."""
    _same_size(p, q)
    lp = 2 * p.a.to_array() + p.b.to_array()
    lq = 2 * q.a.to_array() + q.b.to_array()
    k = sum(KAPPA[x][y] for x, y in zip(lp.tolist(), lq.tolist()))
    return SignedPauli(p.a ^ q.a, p.b ^ q.b, p.phase + q.phase + k)


def commutes(p: SignedPauli, q: SignedPauli) -> bool:
    _same_size(p, q)
    return (p.a.dot(q.b) ^ p.b.dot(q.a)) == 0


def to_matrix(p: SignedPauli) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix; qubit 0 is the leftmost tensor factor."""
    if p.n > DENSE_LIMIT:
        raise DenseLimitError(f"dense Paulis limited to {DENSE_LIMIT} qubits, got {p.n}")
    labels = (2 * p.a.to_array() + p.b.to_array()).tolist()
    mat = reduce(np.kron, (SINGLE[l] for l in labels), np.ones((1, 1), dtype=complex))
    return (1j**p.phase) * mat


def all_paulis(n: int):
    """All ``4**n`` phase-0 Paulis, ordered by the integer value of ``(a; b)``."""
    for v in range(4**n):
        lab = F2Vec.from_int(v, 2 * n)
        arr = lab.to_array()
        yield SignedPauli(F2Vec.from_bits(arr[:n]), F2Vec.from_bits(arr[n:]))


def from_label(label: F2Vec, phase: int = 0) -> SignedPauli:
    """Build from a concatenated ``(a; b)`` label of length 2n."""
    arr = label.to_array()
    n = arr.size // 2
    return SignedPauli(F2Vec.from_bits(arr[:n]), F2Vec.from_bits(arr[n:]), phase)
