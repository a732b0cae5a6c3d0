"""Bit-packed linear algebra over GF(2).

Vectors and matrix rows are packed little-endian into 64-bit words: bit
``j`` lives in word ``j // 64`` at position ``j % 64``. Pad bits past the
logical length are always zero, so word-level equality and hashing are
exact.

Symplectic matrices use the block layout ``[[A, C], [B, D]]`` with the form
``Lambda(n) = [[0, I], [I, 0]]``; coordinate ``i`` pairs with ``n + i``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import _kernels

WORD = 64


class SymplecticViolation(ValueError):
    """A matrix that was required to be symplectic is not."""


def nwords(nbits: int) -> int:
    return max(1, (nbits + WORD - 1) // WORD)


def pack_rows(bits, ncols: int) -> np.ndarray:
    """Pack a 2-D 0/1 array into ``(rows, nwords(ncols))`` uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1, ncols) & 1
    nw = nwords(ncols)
    padded = np.zeros((bits.shape[0], nw * WORD), dtype=np.uint8)
    padded[:, :ncols] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def unpack_rows(words: np.ndarray, ncols: int) -> np.ndarray:
    """Inverse of :func:`pack_rows`; returns a ``(rows, ncols)`` uint8 array."""
    w = np.ascontiguousarray(words, dtype="<u8").reshape(words.shape[0], -1)
    return np.unpackbits(w.view(np.uint8), axis=1, bitorder="little")[:, :ncols]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class F2Vec:
    """Immutable packed bit vector."""

    __slots__ = ("_words", "_len", "_hash")

    def __init__(self, words: np.ndarray, length: int):
        words = np.array(words, dtype=np.uint64).reshape(-1)
        if words.shape[0] != nwords(length):
            raise ValueError(f"expected {nwords(length)} words for {length} bits, got {words.shape[0]}")
        tail = length % WORD
        if tail and words[-1] >> np.uint64(tail):
            raise ValueError("pad bits past the logical length must be zero")
        if length == 0 and words[0]:
            raise ValueError("pad bits past the logical length must be zero")
        self._words = _frozen(words)
        self._len = length
        self._hash = None

    @classmethod
    def zeros(cls, length: int) -> F2Vec:
        return cls(np.zeros(nwords(length), dtype=np.uint64), length)

    @classmethod
    def unit(cls, length: int, index: int) -> F2Vec:
        if not 0 <= index < length:
            raise IndexError(index)
        words = np.zeros(nwords(length), dtype=np.uint64)
        words[index // WORD] = np.uint64(1) << np.uint64(index % WORD)
        return cls(words, length)

    @classmethod
    def from_bits(cls, bits) -> F2Vec:
        bits = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        if np.any(bits > 1):
            raise ValueError("bits must be 0 or 1")
        return cls(pack_rows(bits.reshape(1, -1), bits.size)[0], bits.size)

    @classmethod
    def from_str(cls, text: str) -> F2Vec:
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls.from_bits([int(c) for c in text])

    @classmethod
    def from_int(cls, value: int, length: int) -> F2Vec:
        """Bit ``j`` of the vector is bit ``j`` of ``value``."""
        if value < 0 or value >> length:
            raise ValueError(f"{value} does not fit in {length} bits")
        words = [(value >> (WORD * w)) & 0xFFFFFFFFFFFFFFFF for w in range(nwords(length))]
        return cls(np.array(words, dtype=np.uint64), length)

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __len__(self) -> int:
        return self._len

    def __getitem__(self, i):
        if isinstance(i, slice):
            return F2Vec.from_bits(self.to_array()[i])
        if i < 0:
            i += self._len
        if not 0 <= i < self._len:
            raise IndexError(i)
        return int((self._words[i // WORD] >> np.uint64(i % WORD)) & np.uint64(1))

    def __iter__(self):
        return iter(self.to_array().tolist())

    def to_array(self) -> np.ndarray:
        return unpack_rows(self._words.reshape(1, -1), self._len)[0]

    def to_int(self) -> int:
        return sum(int(w) << (WORD * i) for i, w in enumerate(self._words))

    def _check(self, other: F2Vec):
        if self._len != other._len:
            raise ValueError(f"length mismatch: {self._len} vs {other._len}")

    def __xor__(self, other: F2Vec) -> F2Vec:
        self._check(other)
        return F2Vec(self._words ^ other._words, self._len)

    __add__ = __xor__

    def __and__(self, other: F2Vec) -> F2Vec:
        self._check(other)
        return F2Vec(self._words & other._words, self._len)

    def dot(self, other: F2Vec) -> int:
        self._check(other)
        return int(np.bitwise_count(self._words & other._words).sum()) & 1

    def weight(self) -> int:
        return int(np.bitwise_count(self._words).sum())

    def any(self) -> bool:
        return bool(self._words.any())

    def concat(self, other: F2Vec) -> F2Vec:
        return F2Vec.from_bits(np.concatenate([self.to_array(), other.to_array()]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, F2Vec):
            return NotImplemented
        return self._len == other._len and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._len, self._words.tobytes()))
        return self._hash

    def __str__(self) -> str:
        return "".join(map(str, self.to_array().tolist()))

    def __repr__(self) -> str:
        return f"F2Vec('{self}')"


class F2Mat:
    """Immutable packed bit matrix, row-major."""

    __slots__ = ("_data", "_rows", "_cols")

    def __init__(self, data: np.ndarray, rows: int, cols: int):
        data = np.array(data, dtype=np.uint64).reshape(rows, nwords(cols))
        tail = cols % WORD
        if tail and np.any(data[:, -1] >> np.uint64(tail)):
            raise ValueError("pad bits past the logical width must be zero")
        self._data = _frozen(data)
        self._rows = rows
        self._cols = cols

    @classmethod
    def from_array(cls, bits) -> F2Mat:
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 2:
            raise ValueError("expected a 2-D array")
        if np.any(bits > 1):
            raise ValueError("entries must be 0 or 1")
        return cls(pack_rows(bits, bits.shape[1]), *bits.shape)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> F2Mat:
        return cls(np.zeros((rows, nwords(cols)), dtype=np.uint64), rows, cols)

    @classmethod
    def identity(cls, size: int) -> F2Mat:
        return cls.from_array(np.eye(size, dtype=np.uint8))

    @classmethod
    def from_rows(cls, rows) -> F2Mat:
        rows = list(rows)
        if rows and isinstance(rows[0], F2Vec):
            return cls(np.stack([r.words for r in rows]), len(rows), len(rows[0]))
        return cls.from_array(rows)

    @classmethod
    def from_columns(cls, cols) -> F2Mat:
        cols = list(cols)
        return cls.from_array(np.stack([c.to_array() for c in cols], axis=1))

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return (self._rows, self._cols)

    @property
    def data(self) -> np.ndarray:
        return self._data

    def to_array(self) -> np.ndarray:
        return unpack_rows(self._data, self._cols)

    def row(self, i: int) -> F2Vec:
        return F2Vec(self._data[i], self._cols)

    def col(self, j: int) -> F2Vec:
        return F2Vec.from_bits(self.to_array()[:, j])

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.row(i)[j]

    @property
    def T(self) -> F2Mat:
        return F2Mat.from_array(self.to_array().T)

    def __matmul__(self, other):
        if isinstance(other, F2Vec):
            return self.matvec(other)
        return mat_mul(self, other)

    def matvec(self, v: F2Vec) -> F2Vec:
        if len(v) != self._cols:
            raise ValueError(f"dimension mismatch: {self.shape} @ {len(v)}")
        parity = np.bitwise_count(self._data & v.words).sum(axis=1) & 1
        return F2Vec.from_bits(parity.astype(np.uint8))

    def __add__(self, other: F2Mat) -> F2Mat:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return F2Mat(self._data ^ other._data, self._rows, self._cols)

    def rank(self) -> int:
        work = self._data.copy()
        return _kernels.row_reduce_signed(work, np.zeros(self._rows, dtype=np.uint8), self._cols)

    def is_identity(self) -> bool:
        return self._rows == self._cols and self == F2Mat.identity(self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, F2Mat):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self) -> int:
        return hash((self.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"F2Mat({self._rows}x{self._cols})"

    def __str__(self) -> str:
        return format_matrix_text(self)


def mat_mul(a: F2Mat, b: F2Mat) -> F2Mat:
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    out = _kernels.mat_mul(a.data, np.ascontiguousarray(b.data), a.cols)
    return F2Mat(out, a.rows, b.cols)


def row_reduce_signed(m: F2Mat, signs: F2Vec) -> tuple[F2Mat, F2Vec]:
    """Reduced row-echelon form with a sign column carried along.

    Pivots are taken column by column from the left, choosing the lowest
    eligible row index. Rank-deficient input is allowed.
    """
    if len(signs) != m.rows:
        raise ValueError(f"sign column has {len(signs)} entries for {m.rows} rows")
    work = m.data.copy()
    s = signs.to_array().copy()
    _kernels.row_reduce_signed(work, s, m.cols)
    return F2Mat(work, m.rows, m.cols), F2Vec.from_bits(s)


def lambda_matrix(n: int) -> F2Mat:
    lam = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    lam[:n, n:] = np.eye(n, dtype=np.uint8)
    lam[n:, :n] = np.eye(n, dtype=np.uint8)
    return F2Mat.from_array(lam)


def symplectic_check(m: F2Mat) -> bool:
    if m.rows != m.cols:
        raise ValueError(f"symplectic check needs a square matrix, got {m.shape}")
    if m.rows % 2:
        raise ValueError(f"symplectic check needs an even dimension, got {m.rows}")
    lam = lambda_matrix(m.rows // 2)
    return m.T @ lam @ m == lam


class SymplecticMat:
    """A validated element of Sp(2n, F2)."""

    __slots__ = ("_mat",)

    def __init__(self, mat: F2Mat):
        if not isinstance(mat, F2Mat):
            mat = F2Mat.from_array(mat)
        if not symplectic_check(mat):
            raise SymplecticViolation("matrix is not symplectic")
        self._mat = mat

    @classmethod
    def identity(cls, n: int) -> SymplecticMat:
        return cls(F2Mat.identity(2 * n))

    @property
    def n(self) -> int:
        return self._mat.rows // 2

    @property
    def mat(self) -> F2Mat:
        return self._mat

    def blocks(self):
        """Return ``(A, B, C, D)`` as 0/1 arrays, S = [[A, C], [B, D]]."""
        a = self._mat.to_array()
        n = self.n
        return a[:n, :n], a[n:, :n], a[:n, n:], a[n:, n:]

    def column(self, j: int) -> F2Vec:
        return self._mat.col(j)

    def __matmul__(self, other):
        if isinstance(other, SymplecticMat):
            return SymplecticMat(self._mat @ other._mat)
        return self._mat @ other

    def inverse(self) -> SymplecticMat:
        return symplectic_inverse(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymplecticMat):
            return NotImplemented
        return self._mat == other._mat

    def __hash__(self) -> int:
        return hash(self._mat)

    def __repr__(self) -> str:
        return f"SymplecticMat(n={self.n})"


def symplectic_inverse(s: SymplecticMat) -> SymplecticMat:
    # [[A, C], [B, D]]^-1 = [[D^T, C^T], [B^T, A^T]]
    a, b, c, d = s.blocks()
    inv = np.block([[d.T, c.T], [b.T, a.T]])
    return SymplecticMat(F2Mat.from_array(inv))


# ---------------------------------------------------------------------------
# Uniform sampling of Sp(2n, F2) by symplectic transvections.
#
# Works internally with Python ints as bit vectors in the interleaved
# ordering (coordinate 2i pairs with 2i+1); the result is permuted into the
# block layout at the end.


def symplectic_group_order(n: int) -> int:
    order = 2 ** (n * n)
    for j in range(1, n + 1):
        order *= 4**j - 1
    return order


@lru_cache(maxsize=None)
def _even_mask(nn: int) -> int:
    return int("01" * nn, 2) & ((1 << nn) - 1)


def _swap_pairs(v: int, nn: int) -> int:
    even = _even_mask(nn)
    return ((v & even) << 1) | ((v >> 1) & even)


def _inner(v: int, w: int, nn: int) -> int:
    return (v & _swap_pairs(w, nn)).bit_count() & 1


def _transvect(h: int, v: int, nn: int) -> int:
    return v ^ h if _inner(h, v, nn) else v


def _pair(v: int, i: int) -> int:
    return (v >> (2 * i)) & 3


def _find_transvection(x: int, y: int, nn: int) -> tuple[int, int]:
    """Return ``(h1, h2)`` with ``y = T_h2(T_h1(x))``; zero means identity."""
    if x == y:
        return 0, 0
    if _inner(x, y, nn):
        return x ^ y, 0
    z = 0
    for i in range(nn // 2):
        xp, yp = _pair(x, i), _pair(y, i)
        if xp and yp:
            zp = xp ^ yp
            if zp == 0:
                # x and y agree on this pair
                zp = _nonorth_pair(xp)
            z = zp << (2 * i)
            return x ^ z, y ^ z
    for i in range(nn // 2):
        xp, yp = _pair(x, i), _pair(y, i)
        if xp and not yp:
            z |= _nonorth_pair(xp) << (2 * i)
            break
    for i in range(nn // 2):
        xp, yp = _pair(x, i), _pair(y, i)
        if yp and not xp:
            z |= _nonorth_pair(yp) << (2 * i)
            break
    return x ^ z, y ^ z


def _nonorth_pair(p: int) -> int:
    # a 2-bit pair vector q with symplectic form <p, q> = 1
    return {1: 2, 2: 1, 3: 1}[p]


def _symplectic_interleaved(levels, n: int) -> np.ndarray:
    """Assemble a symplectic matrix from per-level choices.

    ``levels[m]`` for the block of size ``2(n - m)`` is ``(f1, bits)`` with
    ``f1`` a nonzero int of ``2(n-m)`` bits and ``bits`` an int of
    ``2(n-m) - 1`` bits.
    """
    g = None
    for m in reversed(range(n)):
        nn = 2 * (n - m)
        f1, bits = levels[m]
        e1 = 1
        t1, t2 = _find_transvection(e1, f1, nn)
        eprime = e1 | ((bits >> 1) << 2)
        h0 = _transvect(t2, _transvect(t1, eprime, nn), nn)
        if bits & 1:
            f1 = 0
        cols = [1, 2]
        if g is not None:
            cols += [c << 2 for c in g]
        # the form is symmetric, so swap each h once instead of every column
        hs = [(h, _swap_pairs(h, nn)) for h in (t1, t2, h0, f1) if h]
        out = []
        for c in cols:
            for h, hsw in hs:
                if (c & hsw).bit_count() & 1:
                    c ^= h
            out.append(c)
        g = out
    nn = 2 * n
    raw = np.array([c.to_bytes((nn + 7) // 8, "little") for c in g], dtype=f"S{(nn + 7) // 8}")
    bits = np.unpackbits(raw.view(np.uint8).reshape(len(g), -1), axis=1, bitorder="little")[:, :nn]
    return np.ascontiguousarray(bits.T)


def _interleaved_to_block(arr: np.ndarray) -> np.ndarray:
    n = arr.shape[0] // 2
    # block coordinate i <- interleaved 2i, block n+i <- interleaved 2i+1
    perm = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
    return arr[np.ix_(perm, perm)]


def symplectic_from_index(index: int, n: int) -> SymplecticMat:
    """Deterministic bijection from ``range(symplectic_group_order(n))``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= index < symplectic_group_order(n):
        raise ValueError("index out of range")
    levels = []
    for m in range(n):
        nn = 2 * (n - m)
        s = (1 << nn) - 1
        f1 = index % s + 1
        index //= s
        bits = index % (1 << (nn - 1))
        index >>= nn - 1
        levels.append((f1, bits))
    return SymplecticMat(F2Mat.from_array(_interleaved_to_block(_symplectic_interleaved(levels, n))))


def _random_bits(rng: np.random.Generator, nbits: int) -> int:
    bits = rng.integers(0, 2, size=nbits, dtype=np.uint8)
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def random_symplectic(n: int, rng: np.random.Generator) -> SymplecticMat:
    """Uniform sample from Sp(2n, F2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    levels = []
    for m in range(n):
        nn = 2 * (n - m)
        f1 = 0
        while f1 == 0:  # uniform over nonzero vectors
            f1 = _random_bits(rng, nn)
        levels.append((f1, _random_bits(rng, nn - 1)))
    return SymplecticMat(F2Mat.from_array(_interleaved_to_block(_symplectic_interleaved(levels, n))))


# ---------------------------------------------------------------------------
# Text fixtures: one row per line of '0'/'1', optional sign column after '|'.


def parse_matrix_text(text: str) -> tuple[F2Mat, F2Vec | None]:
    rows, signs = [], []
    for line in text.strip().splitlines():
        line = line.strip()
        if not line:
            continue
        body, sep, sign = line.partition("|")
        rows.append([int(c) for c in body if c in "01"] if set(body) <= {"0", "1"} else _bad(line))
        if sep:
            signs.append(int(sign.strip()) if sign.strip() in ("0", "1") else _bad(line))
    if signs and len(signs) != len(rows):
        raise ValueError("sign column must be present on every row or none")
    if len({len(r) for r in rows}) > 1:
        raise ValueError("ragged matrix text")
    mat = F2Mat.from_array(np.array(rows, dtype=np.uint8).reshape(len(rows), -1))
    return mat, (F2Vec.from_bits(signs) if signs else None)


def _bad(line):
    raise ValueError(f"malformed matrix row: {line!r}")


def format_matrix_text(m: F2Mat, signs: F2Vec | None = None) -> str:
    arr = m.to_array()
    lines = ["".join(map(str, row.tolist())) for row in arr]
    if signs is not None:
        lines = [f"{line}|{s}" for line, s in zip(lines, signs)]
    return "\n".join(lines)
