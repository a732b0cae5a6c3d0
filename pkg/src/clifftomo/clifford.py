"""Clifford unitaries up to global phase, stored as signed tableaux.

A tableau records the images of the 2n generators: ``C Z_i C^dag =
(-1)^f_i P(a_i, b_i)`` and ``C X_i C^dag = (-1)^h_i P(c_i, d_i)``. The
symplectic part has columns ``a_i; b_i`` (i < n) then ``c_i; d_i``. The
Clifford factors as ``C = Ctilde P(h, f)`` where ``Ctilde`` has the same
symplectic part and all-positive images.

Internally the images are packed Pauli rows: row ``g < n`` is the image of
``Z_g`` and row ``n + g`` the image of ``X_g``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from . import _kernels
from .densesim import DenseUnitary
from .f2la import F2Mat, F2Vec, SymplecticMat, pack_rows, random_symplectic, unpack_rows
from .f2la import symplectic_from_index, symplectic_group_order, symplectic_inverse
from .pauli import DENSE_LIMIT, DenseLimitError, SignedPauli


class Gate(NamedTuple):
    name: str
    qubits: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.name}({','.join(map(str, self.qubits))})"


def H(q: int) -> Gate:
    return Gate("H", (q,))


def S(q: int) -> Gate:
    return Gate("S", (q,))


def X(q: int) -> Gate:
    return Gate("X", (q,))


def Z(q: int) -> Gate:
    return Gate("Z", (q,))


def CNOT(c: int, t: int) -> Gate:
    if c == t:
        raise ValueError("CNOT control and target must differ")
    return Gate("CNOT", (c, t))


_ROW_KERNELS = {"H": "rows_h", "S": "rows_s", "X": "rows_x", "Z": "rows_z", "CNOT": "rows_cnot"}
_OPCODES = {
    "H": _kernels.OP_H,
    "S": _kernels.OP_S,
    "X": _kernels.OP_X,
    "Z": _kernels.OP_Z,
    "CNOT": _kernels.OP_CNOT,
}


def gate_program(gates: Iterable[Gate], offset: int = 0) -> np.ndarray:
    """Encode gates as ``(opcode, q0, q1)`` rows for ``_kernels.rows_program``."""
    ops = [(_OPCODES[g.name], g.qubits[0], g.qubits[-1]) for g in gates]
    prog = np.array(ops, dtype=np.int64).reshape(-1, 3)
    prog[:, 1:] += offset
    return prog


def apply_gate_rows(z, x, ph, gate: Gate, offset: int = 0):
    """Conjugate packed Pauli rows in place by one gate."""
    fn = getattr(_kernels, _ROW_KERNELS[gate.name])
    fn(z, x, ph, *(q + offset for q in gate.qubits))


@dataclass(frozen=True)
class GateSeq:
    """Gates in time order (first element acts first)."""

    n: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        try:
            prog = gate_program(self.gates)
        except KeyError as exc:
            raise ValueError(f"unsupported gate {exc.args[0]}") from None
        bad = np.flatnonzero(((prog[:, 1:] < 0) | (prog[:, 1:] >= self.n)).any(axis=1))
        if bad.size:
            raise ValueError(f"gate {self.gates[bad[0]]} out of range for {self.n} qubits")
        self.__dict__["program"] = prog

    def __iter__(self):
        return iter(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __str__(self) -> str:
        return " ".join(map(str, self.gates))

    @cached_property
    def program(self) -> np.ndarray:
        return gate_program(self.gates)

    def inverse(self) -> GateSeq:
        out = []
        for g in reversed(self.gates):
            out.extend([g, Z(g.qubits[0])] if g.name == "S" else [g])
        return GateSeq(self.n, out)


class CliffordTableau:
    """A Clifford up to global phase."""

    __slots__ = ("n", "_z", "_x", "_ph", "_s")

    def __init__(self, s: SymplecticMat, f: F2Vec, h: F2Vec):
        n = s.n
        if len(f) != n or len(h) != n:
            raise ValueError(f"sign vectors must have {n} bits")
        images = s.mat.T.to_array()  # row g = (a_g; b_g)
        self.n = n
        self._z = pack_rows(images[:, :n], n)
        self._x = pack_rows(images[:, n:], n)
        self._ph = (2 * np.concatenate([f.to_array(), h.to_array()])).astype(np.uint8)
        self._s = s
        self._freeze()

    def _freeze(self):
        for arr in (self._z, self._x, self._ph):
            arr.flags.writeable = False

    @classmethod
    def _from_rows(cls, n, z, x, ph) -> CliffordTableau:
        if np.any(ph & 1):
            raise ValueError("tableau images must be Hermitian")
        t = cls.__new__(cls)
        t.n = n
        t._z, t._x, t._ph = z, x, ph
        t._s = None
        t._freeze()
        return t

    @classmethod
    def identity(cls, n: int) -> CliffordTableau:
        return cls(SymplecticMat.identity(n), F2Vec.zeros(n), F2Vec.zeros(n))

    @classmethod
    def from_gates(cls, n: int, gates: Iterable[Gate]) -> CliffordTableau:
        z, x, ph = cls.identity(n)._rows_copy()
        seq = gates if isinstance(gates, GateSeq) else GateSeq(n, gates)
        _kernels.rows_program(z, x, ph, seq.program)
        return cls._from_rows(n, z, x, ph)

    @classmethod
    def from_images(cls, z_images, x_images) -> CliffordTableau:
        """Build from the signed images of ``Z_0..Z_{n-1}`` and ``X_0..X_{n-1}``."""
        rows = list(z_images) + list(x_images)
        n = len(rows) // 2
        if any(r.n != n for r in rows) or len(z_images) != n:
            raise ValueError("need n images of each kind on n qubits")
        if any(not r.is_hermitian() for r in rows):
            raise ValueError("images must be Hermitian")
        s = SymplecticMat(F2Mat.from_columns(r.label() for r in rows))
        f = F2Vec.from_bits([r.phase >> 1 for r in z_images])
        h = F2Vec.from_bits([r.phase >> 1 for r in x_images])
        return cls(s, f, h)

    def _rows_copy(self):
        return self._z.copy(), self._x.copy(), self._ph.copy()

    @property
    def rows(self):
        """Read-only packed image rows ``(z, x, phase)``."""
        return self._z, self._x, self._ph

    @property
    def s(self) -> SymplecticMat:
        if self._s is None:
            n = self.n
            images = np.concatenate([unpack_rows(self._z, n), unpack_rows(self._x, n)], axis=1)
            self._s = SymplecticMat(F2Mat.from_array(images.T))
        return self._s

    @property
    def f(self) -> F2Vec:
        return F2Vec.from_bits(self._ph[: self.n] >> 1)

    @property
    def h(self) -> F2Vec:
        return F2Vec.from_bits(self._ph[self.n :] >> 1)

    def image(self, g: int) -> SignedPauli:
        """Signed image of generator ``g`` (``Z_g`` for g < n, else ``X_{g-n}``)."""
        n = self.n
        return SignedPauli(F2Vec(self._z[g], n), F2Vec(self._x[g], n), int(self._ph[g]))

    def z_image(self, i: int) -> SignedPauli:
        return self.image(i)

    def x_image(self, i: int) -> SignedPauli:
        return self.image(self.n + i)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CliffordTableau):
            return NotImplemented
        return equal_up_to_phase(self, other)

    def __hash__(self) -> int:
        return hash((self.n, self._z.tobytes(), self._x.tobytes(), self._ph.tobytes()))

    def __repr__(self) -> str:
        return f"CliffordTableau(n={self.n})"

    def to_text(self) -> str:
        return tableau_to_text(self)


def _same_n(t1, t2):
    if t1.n != t2.n:
        raise ValueError(f"size mismatch: {t1.n} vs {t2.n} qubits")


def conjugate(t: CliffordTableau, p: SignedPauli) -> SignedPauli:
    """Return ``C p C^dag`` with exact phase."""
    _same_n(t, p)
    n = t.n
    z = p.a.words.reshape(1, -1).copy()
    x = p.b.words.reshape(1, -1).copy()
    ph = np.array([p.phase], dtype=np.uint8)
    _kernels.rows_conjugate(z, x, ph, 0, n, *t.rows)
    return SignedPauli(F2Vec(z[0], n), F2Vec(x[0], n), int(ph[0]))


def compose(t1: CliffordTableau, t2: CliffordTableau) -> CliffordTableau:
    """Tableau of the product ``C1 C2`` (``C2`` acts first)."""
    _same_n(t1, t2)
    z, x, ph = t2._rows_copy()
    _kernels.rows_conjugate(z, x, ph, 0, t1.n, *t1.rows)
    return CliffordTableau._from_rows(t1.n, z, x, ph)


def inverse(t: CliffordTableau) -> CliffordTableau:
    n = t.n
    unsigned = CliffordTableau(symplectic_inverse(t.s), F2Vec.zeros(n), F2Vec.zeros(n))
    # C * unsigned is a Pauli; the sign it puts on each generator is the
    # sign the true inverse carries on that generator's image
    z, x, ph = compose(t, unsigned).rows
    ident = CliffordTableau.identity(n)
    if not (np.array_equal(z, ident._z) and np.array_equal(x, ident._x)):
        raise AssertionError("symplectic inverse did not cancel")
    zi, xi, _ = unsigned._rows_copy()
    return CliffordTableau._from_rows(n, zi, xi, ph.copy())


def equal_up_to_phase(t1: CliffordTableau, t2: CliffordTableau) -> bool:
    _same_n(t1, t2)
    return all(np.array_equal(a, b) for a, b in zip(t1.rows, t2.rows))


def conjugate_transform(t: CliffordTableau) -> tuple[F2Vec, F2Vec]:
    """``(alpha, beta)`` with ``C* = e^{i theta} C P(alpha, beta)``.

    alpha_i = c_i . d_i (X images), beta_i = a_i . b_i (Z images).
    """
    z, x, _ = t.rows
    parity = (np.bitwise_count(z & x).sum(axis=1) & 1).astype(np.uint8)
    return F2Vec.from_bits(parity[t.n :]), F2Vec.from_bits(parity[: t.n])


def _row_bits(z, x, g, n):
    return unpack_rows(z[g : g + 1], n)[0], unpack_rows(x[g : g + 1], n)[0]


def compile(t: CliffordTableau) -> GateSeq:
    """Synthesize an H/S/CNOT/X/Z circuit for ``t`` with O(n^2) gates.

    Works by left-multiplying gates until the tableau is the identity,
    qubit by qubit: the X image is turned X-type, moved onto its qubit and
    stripped of other support with CNOTs; the Z image is then cleared while
    the fixed X image is left alone; residual signs are fixed with X/Z.
    The circuit for ``t`` is the inverse of that reduction.
    """
    n = t.n
    z, x, ph = t._rows_copy()
    reduction = []

    # gates within one batch are chosen from the same snapshot and touch
    # disjoint decisions, so each batch runs as a single program
    def run(batch):
        if batch:
            _kernels.rows_program(z, x, ph, gate_program(batch))
            reduction.extend(batch)

    for i in range(n):
        xi = n + i
        zb, xb = _row_bits(z, x, xi, n)
        run([S(j) if xb[j] else H(j) for j in np.flatnonzero(zb[i:]) + i])
        _, xb = _row_bits(z, x, xi, n)
        if not xb[i]:
            run([CNOT(i + int(np.flatnonzero(xb[i:])[0]), i)])
            _, xb = _row_bits(z, x, xi, n)
        run([CNOT(i, int(j)) for j in np.flatnonzero(xb[i + 1 :]) + i + 1])

        zb, xb = _row_bits(z, x, i, n)
        if xb[i]:  # Y on the pivot: HSH fixes X and sends Y to Z
            run([H(i), S(i), H(i)])
            zb, xb = _row_bits(z, x, i, n)
        batch = []
        for j in np.flatnonzero(xb[i + 1 :]) + i + 1:
            if zb[j]:
                batch.append(S(int(j)))
            batch.append(H(int(j)))
        run(batch)
        zb, _ = _row_bits(z, x, i, n)
        run([CNOT(int(j), i) for j in np.flatnonzero(zb[i + 1 :]) + i + 1])

    fix = []
    for i in range(n):
        if ph[n + i]:
            fix.append(Z(i))
        if ph[i]:
            fix.append(X(i))
    run(fix)
    return GateSeq(n, reduction).inverse()


def _apply_gate_dense(mat: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    d = 1 << n
    if gate.name == "CNOT":
        c, t = gate.qubits
        cm, tm = 1 << (n - 1 - c), 1 << (n - 1 - t)
        r = np.arange(d)
        return mat[np.where(r & cm, r ^ tm, r)]
    q = gate.qubits[0]
    u = _SINGLE_GATES[gate.name]
    view = mat.reshape(1 << q, 2, d >> (q + 1), d)
    return np.einsum("ab,ibjk->iajk", u, view).reshape(d, d)


_SINGLE_GATES = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def gates_to_matrix(seq: GateSeq) -> np.ndarray:
    mat = np.eye(1 << seq.n, dtype=complex)
    for g in seq:
        mat = _apply_gate_dense(mat, g, seq.n)
    return mat


def canonicalize_phase(mat: np.ndarray) -> np.ndarray:
    """Fix global phase: first nonzero entry of column 0 made real-positive."""
    col = mat[:, 0]
    k = int(np.flatnonzero(np.abs(col) > 1e-12)[0])
    return mat * (abs(col[k]) / col[k])


def to_matrix(t: CliffordTableau) -> DenseUnitary:
    if t.n > DENSE_LIMIT:
        raise DenseLimitError(f"dense export limited to {DENSE_LIMIT} qubits, got {t.n}")
    return DenseUnitary(canonicalize_phase(gates_to_matrix(compile(t))))


def random_clifford(n: int, rng: np.random.Generator) -> CliffordTableau:
    """Uniform over Cliffords modulo phase: uniform symplectic part and signs."""
    s = random_symplectic(n, rng)
    f = F2Vec.from_bits(rng.integers(0, 2, size=n, dtype=np.uint8))
    h = F2Vec.from_bits(rng.integers(0, 2, size=n, dtype=np.uint8))
    return CliffordTableau(s, f, h)


def all_cliffords(n: int):
    """Enumerate every Clifford modulo phase (feasible for n <= 2)."""
    for idx in range(symplectic_group_order(n)):
        s = symplectic_from_index(idx, n)
        for signs in range(4**n):
            bits = F2Vec.from_int(signs, 2 * n).to_array()
            yield CliffordTableau(s, F2Vec.from_bits(bits[:n]), F2Vec.from_bits(bits[n:]))


# Text form: "n=<count>", then the n X images, then the n Z images.


def tableau_to_text(t: CliffordTableau) -> str:
    lines = [f"n={t.n}"]
    lines += [str(t.x_image(i)) for i in range(t.n)]
    lines += [str(t.z_image(i)) for i in range(t.n)]
    return "\n".join(lines)


def tableau_from_text(text: str) -> CliffordTableau:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n="):
        raise ValueError("tableau text must start with 'n=<count>'")
    n = int(lines[0][2:])
    body = [SignedPauli.from_str(ln) for ln in lines[1:]]
    if len(body) != 2 * n:
        raise ValueError(f"expected {2 * n} image rows, got {len(body)}")
    return CliffordTableau.from_images(body[n:], body[:n])


__all__ = [
    "CNOT",
    "CliffordTableau",
    "Gate",
    "GateSeq",
    "H",
    "S",
    "X",
    "Z",
    "all_cliffords",
    "apply_gate_rows",
    "gate_program",
    "canonicalize_phase",
    "compile",
    "compose",
    "conjugate",
    "conjugate_transform",
    "equal_up_to_phase",
    "gates_to_matrix",
    "inverse",
    "random_clifford",
    "tableau_from_text",
    "tableau_to_text",
    "to_matrix",
]
