# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled bit-packed kernels. Same contracts as ``_pykernels``."""

import numpy as np

from libc.stdint cimport uint8_t, uint64_t

NAME = "compiled"

cdef extern from *:
    """
    static inline int cf_popcount(unsigned long long v) { return __builtin_popcountll(v); }
    """
    int cf_popcount(unsigned long long v) nogil


cdef inline uint64_t getbit(const uint64_t[:, ::1] rows, Py_ssize_t r, Py_ssize_t j) noexcept nogil:
    return (rows[r, j >> 6] >> (j & 63)) & 1


cdef inline void setbit(uint64_t[:, ::1] rows, Py_ssize_t r, Py_ssize_t j, uint64_t v) noexcept nogil:
    cdef uint64_t m = (<uint64_t>1) << (j & 63)
    if v:
        rows[r, j >> 6] |= m
    else:
        rows[r, j >> 6] &= ~m


cdef inline int mulacc(uint64_t* az, uint64_t* ax, const uint64_t* gz, const uint64_t* gx,
                       Py_ssize_t nw) noexcept nogil:
    cdef int k = 0
    cdef Py_ssize_t w
    cdef uint64_t a1, b1, a2, b2
    for w in range(nw):
        a1 = az[w]
        b1 = ax[w]
        a2 = gz[w]
        b2 = gx[w]
        k += (-cf_popcount(a1 & b1) - cf_popcount(a2 & b2)
              + 2 * cf_popcount(b1 & a2) + cf_popcount((a1 ^ a2) & (b1 ^ b2)))
        az[w] = a1 ^ a2
        ax[w] = b1 ^ b2
    return k & 3


def mat_mul(const uint64_t[:, ::1] a, const uint64_t[:, ::1] b, Py_ssize_t inner):
    cdef Py_ssize_t nr = a.shape[0], nw = b.shape[1], i, k, w
    out = np.zeros((nr, nw), dtype=np.uint64)
    cdef uint64_t[:, ::1] o = out
    with nogil:
        for i in range(nr):
            for k in range(inner):
                if (a[i, k >> 6] >> (k & 63)) & 1:
                    for w in range(nw):
                        o[i, w] ^= b[k, w]
    return out


def row_reduce_signed(uint64_t[:, ::1] m, uint8_t[::1] signs, Py_ssize_t ncols):
    cdef Py_ssize_t rows = m.shape[0], nw = m.shape[1]
    cdef Py_ssize_t piv = 0, col, r, rr, w, wi
    cdef uint64_t bit, tmp
    cdef uint8_t ts
    with nogil:
        for col in range(ncols):
            if piv == rows:
                break
            wi = col >> 6
            bit = (<uint64_t>1) << (col & 63)
            r = piv
            while r < rows and not (m[r, wi] & bit):
                r += 1
            if r == rows:
                continue
            if r != piv:
                for w in range(nw):
                    tmp = m[r, w]
                    m[r, w] = m[piv, w]
                    m[piv, w] = tmp
                ts = signs[r]
                signs[r] = signs[piv]
                signs[piv] = ts
            for rr in range(rows):
                if rr != piv and (m[rr, wi] & bit):
                    for w in range(nw):
                        m[rr, w] ^= m[piv, w]
                    signs[rr] ^= signs[piv]
            piv += 1
    return piv


def pauli_mul_phase(const uint64_t[::1] z1, const uint64_t[::1] x1,
                    const uint64_t[::1] z2, const uint64_t[::1] x2):
    cdef Py_ssize_t w
    cdef int k = 0
    for w in range(z1.shape[0]):
        k += (-cf_popcount(z1[w] & x1[w]) - cf_popcount(z2[w] & x2[w])
              + 2 * cf_popcount(x1[w] & z2[w])
              + cf_popcount((z1[w] ^ z2[w]) & (x1[w] ^ x2[w])))
    return k & 3


cdef inline void gate_h(uint64_t[:, ::1] z, uint64_t[:, ::1] x, uint8_t[::1] ph, Py_ssize_t q) noexcept nogil:
    cdef Py_ssize_t r, w = q >> 6
    cdef int sh = q & 63
    cdef uint64_t zb, xb, d
    for r in range(z.shape[0]):
        zb = (z[r, w] >> sh) & 1
        xb = (x[r, w] >> sh) & 1
        ph[r] = (ph[r] + 2 * (zb & xb)) & 3
        d = (zb ^ xb) << sh
        z[r, w] ^= d
        x[r, w] ^= d


cdef inline void gate_s(uint64_t[:, ::1] z, uint64_t[:, ::1] x, uint8_t[::1] ph, Py_ssize_t q) noexcept nogil:
    cdef Py_ssize_t r, w = q >> 6
    cdef int sh = q & 63
    cdef uint64_t zb, xb
    for r in range(z.shape[0]):
        zb = (z[r, w] >> sh) & 1
        xb = (x[r, w] >> sh) & 1
        ph[r] = (ph[r] + 2 * (zb & xb)) & 3
        z[r, w] ^= xb << sh


cdef inline void gate_cnot(uint64_t[:, ::1] z, uint64_t[:, ::1] x, uint8_t[::1] ph,
                           Py_ssize_t c, Py_ssize_t t) noexcept nogil:
    cdef Py_ssize_t r, wc = c >> 6, wt = t >> 6
    cdef int sc = c & 63, st = t & 63
    cdef uint64_t xc, zc, xt, zt
    for r in range(z.shape[0]):
        xc = (x[r, wc] >> sc) & 1
        zc = (z[r, wc] >> sc) & 1
        xt = (x[r, wt] >> st) & 1
        zt = (z[r, wt] >> st) & 1
        ph[r] = (ph[r] + 2 * (xc & zt & (xt ^ zc ^ 1))) & 3
        x[r, wt] ^= xc << st
        z[r, wc] ^= zt << sc


cdef inline void gate_flip(const uint64_t[:, ::1] part, uint8_t[::1] ph, Py_ssize_t q) noexcept nogil:
    # X flips rows with Z support on q, Z flips rows with X support
    cdef Py_ssize_t r
    for r in range(part.shape[0]):
        ph[r] = (ph[r] + 2 * getbit(part, r, q)) & 3


def rows_h(uint64_t[:, ::1] z, uint64_t[:, ::1] x, uint8_t[::1] ph, Py_ssize_t q):
    with nogil:
        gate_h(z, x, ph, q)


def rows_s(uint64_t[:, ::1] z, uint64_t[:, ::1] x, uint8_t[::1] ph, Py_ssize_t q):
    with nogil:
        gate_s(z, x, ph, q)


def rows_cnot(uint64_t[:, ::1] z, uint64_t[:, ::1] x, uint8_t[::1] ph, Py_ssize_t c, Py_ssize_t t):
    with nogil:
        gate_cnot(z, x, ph, c, t)


def rows_x(uint64_t[:, ::1] z, uint64_t[:, ::1] x, uint8_t[::1] ph, Py_ssize_t q):
    with nogil:
        gate_flip(z, ph, q)


def rows_z(uint64_t[:, ::1] z, uint64_t[:, ::1] x, uint8_t[::1] ph, Py_ssize_t q):
    with nogil:
        gate_flip(x, ph, q)


def rows_program(uint64_t[:, ::1] z, uint64_t[:, ::1] x, uint8_t[::1] ph, const long long[:, ::1] ops):
    cdef Py_ssize_t i
    cdef long long code
    with nogil:
        for i in range(ops.shape[0]):
            code = ops[i, 0]
            if code == 0:
                gate_h(z, x, ph, ops[i, 1])
            elif code == 1:
                gate_s(z, x, ph, ops[i, 1])
            elif code == 2:
                gate_flip(z, ph, ops[i, 1])
            elif code == 3:
                gate_flip(x, ph, ops[i, 1])
            else:
                gate_cnot(z, x, ph, ops[i, 1], ops[i, 2])


def rows_conjugate(uint64_t[:, ::1] z, uint64_t[:, ::1] x, uint8_t[::1] ph,
                   Py_ssize_t offset, Py_ssize_t n,
                   const uint64_t[:, ::1] iz, const uint64_t[:, ::1] ix, const uint8_t[::1] iph):
    cdef Py_ssize_t nw = iz.shape[1], r, i, q, w
    acc = np.zeros((2, nw), dtype=np.uint64)
    cdef uint64_t[:, ::1] a = acc
    cdef uint64_t ab, bb
    cdef int k
    with nogil:
        for r in range(z.shape[0]):
            for w in range(nw):
                a[0, w] = 0
                a[1, w] = 0
            k = ph[r]
            for i in range(n):
                q = offset + i
                ab = getbit(z, r, q)
                bb = getbit(x, r, q)
                if ab & bb:
                    k += 3
                if ab:
                    k += mulacc(&a[0, 0], &a[1, 0], &iz[i, 0], &ix[i, 0], nw) + iph[i]
                if bb:
                    k += mulacc(&a[0, 0], &a[1, 0], &iz[n + i, 0], &ix[n + i, 0], nw) + iph[n + i]
            for i in range(n):
                q = offset + i
                setbit(z, r, q, getbit(a, 0, i))
                setbit(x, r, q, getbit(a, 1, i))
            ph[r] = k & 3
