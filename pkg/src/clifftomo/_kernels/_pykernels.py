"""Pure-Python (numpy) implementation of the bit-packed kernels.

Every function here has an identically named counterpart in the compiled
``_ckernels`` module. Bit rows are C-contiguous ``uint64`` arrays, one row
per matrix row or Pauli, bit ``j`` stored in word ``j // 64`` at position
``j % 64``. Phases are ``uint8`` exponents of ``i`` kept modulo 4.
"""

import numpy as np

NAME = "python"

_ONE = np.uint64(1)


def _bit(rows, j):
    return (rows[:, j >> 6] >> np.uint64(j & 63)) & _ONE


def _pc(words):
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def mat_mul(a, b, inner):
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint64)
    for k in range(inner):
        sel = _bit(a, k).astype(bool)
        if sel.any():
            out[sel] ^= b[k]
    return out


def row_reduce_signed(m, signs, ncols):
    rows = m.shape[0]
    piv = 0
    for col in range(ncols):
        if piv == rows:
            break
        colbits = _bit(m, col).astype(bool)
        cand = np.flatnonzero(colbits[piv:])
        if cand.size == 0:
            continue
        r = piv + int(cand[0])
        if r != piv:
            m[[piv, r]] = m[[r, piv]]
            signs[[piv, r]] = signs[[r, piv]]
            colbits[[piv, r]] = colbits[[r, piv]]
        colbits[piv] = False
        m[colbits] ^= m[piv]
        signs[colbits] ^= signs[piv]
        piv += 1
    return piv


def pauli_mul_phase(z1, x1, z2, x2):
    k = (
        -int(_pc(z1 & x1))
        - int(_pc(z2 & x2))
        + 2 * int(_pc(x1 & z2))
        + int(_pc((z1 ^ z2) & (x1 ^ x2)))
    )
    return k & 3


def _add_phase(ph, inc):
    ph[:] = (ph.astype(np.int64) + inc) & 3


def rows_h(z, x, ph, q):
    w, sh = q >> 6, np.uint64(q & 63)
    zb = (z[:, w] >> sh) & _ONE
    xb = (x[:, w] >> sh) & _ONE
    _add_phase(ph, 2 * (zb & xb).astype(np.int64))
    d = (zb ^ xb) << sh
    z[:, w] ^= d
    x[:, w] ^= d


def rows_s(z, x, ph, q):
    w, sh = q >> 6, np.uint64(q & 63)
    zb = (z[:, w] >> sh) & _ONE
    xb = (x[:, w] >> sh) & _ONE
    _add_phase(ph, 2 * (zb & xb).astype(np.int64))
    z[:, w] ^= xb << sh


def rows_cnot(z, x, ph, c, t):
    wc, sc = c >> 6, np.uint64(c & 63)
    wt, st = t >> 6, np.uint64(t & 63)
    xc = (x[:, wc] >> sc) & _ONE
    zc = (z[:, wc] >> sc) & _ONE
    xt = (x[:, wt] >> st) & _ONE
    zt = (z[:, wt] >> st) & _ONE
    _add_phase(ph, 2 * (xc & zt & (xt ^ zc ^ _ONE)).astype(np.int64))
    x[:, wt] ^= xc << st
    z[:, wc] ^= zt << sc


def rows_x(z, x, ph, q):
    _add_phase(ph, 2 * _bit(z, q).astype(np.int64))


def rows_z(z, x, ph, q):
    _add_phase(ph, 2 * _bit(x, q).astype(np.int64))


# gate program opcodes: rows of (code, q0, q1)
OP_H, OP_S, OP_X, OP_Z, OP_CNOT = range(5)


def rows_program(z, x, ph, ops):
    """Apply a whole gate program in order; same effect as the single-gate calls."""
    for code, q0, q1 in ops.tolist():
        if code == OP_H:
            rows_h(z, x, ph, q0)
        elif code == OP_S:
            rows_s(z, x, ph, q0)
        elif code == OP_X:
            rows_x(z, x, ph, q0)
        elif code == OP_Z:
            rows_z(z, x, ph, q0)
        else:
            rows_cnot(z, x, ph, q0, q1)


def rows_conjugate(z, x, ph, offset, n, iz, ix, iph):
    """Conjugate the register ``[offset, offset+n)`` of every row by a tableau.

    ``iz/ix/iph`` hold the 2n image rows: row ``g < n`` is the image of
    ``Z_g``, row ``n + g`` the image of ``X_g``.
    """
    rows = z.shape[0]
    wn = iz.shape[1]
    abits = np.stack([_bit(z, offset + i) for i in range(n)], axis=1).astype(bool)
    bbits = np.stack([_bit(x, offset + i) for i in range(n)], axis=1).astype(bool)
    k = ph.astype(np.int64) + 3 * (abits & bbits).sum(axis=1)
    acc_z = np.zeros((rows, wn), dtype=np.uint64)
    acc_x = np.zeros((rows, wn), dtype=np.uint64)
    for i in range(n):
        for sel, g in ((abits[:, i], i), (bbits[:, i], n + i)):
            if not sel.any():
                continue
            az, ax = acc_z[sel], acc_x[sel]
            gz, gx = iz[g], ix[g]
            k[sel] += (
                -_pc(az & ax)
                - int(_pc(gz & gx))
                + 2 * _pc(ax & gz)
                + _pc((az ^ gz) & (ax ^ gx))
                + int(iph[g])
            )
            acc_z[sel] = az ^ gz
            acc_x[sel] = ax ^ gx
    for i in range(n):
        q = offset + i
        w, sh = q >> 6, np.uint64(q & 63)
        keep = ~(_ONE << sh)
        z[:, w] = (z[:, w] & keep) | (_bit(acc_z, i) << sh)
        x[:, w] = (x[:, w] & keep) | (_bit(acc_x, i) << sh)
    ph[:] = k & 3
