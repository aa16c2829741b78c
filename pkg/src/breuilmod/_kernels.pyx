# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: row reduction mod p and polynomial matrix products.

Signature-compatible with _kernels_py; selected by _accel when importable.
"""

import numpy as np

BACKEND = "c"


cdef long _invmod(long a, long p):
    # p is prime and 0 < a < p
    cdef long result = 1
    cdef long base = a % p
    cdef long n = p - 2
    while n:
        if n & 1:
            result = (result * base) % p
        base = (base * base) % p
        n >>= 1
    return result


def rref_mod(mat, long p):
    """Reduced row echelon form over F_p; returns (R, pivot_columns)."""
    m_arr = np.ascontiguousarray(mat, dtype=np.int64) % p
    cdef long[:, ::1] m = m_arr
    cdef Py_ssize_t rows = m.shape[0]
    cdef Py_ssize_t cols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k
    cdef long inv, factor, tmp
    pivots = []
    for c in range(cols):
        if r >= rows:
            break
        i = -1
        for k in range(r, rows):
            if m[k, c] != 0:
                i = k
                break
        if i < 0:
            continue
        if i != r:
            for j in range(cols):
                tmp = m[r, j]
                m[r, j] = m[i, j]
                m[i, j] = tmp
        inv = _invmod(m[r, c], p)
        if inv != 1:
            for j in range(cols):
                m[r, j] = (m[r, j] * inv) % p
        for k in range(rows):
            if k == r:
                continue
            factor = m[k, c]
            if factor == 0:
                continue
            for j in range(cols):
                m[k, j] = (m[k, j] - factor * m[r, j]) % p
                if m[k, j] < 0:
                    m[k, j] += p
        pivots.append(c)
        r += 1
    return m_arr, pivots


def poly_conv(a, b, long p):
    """Full 1-D convolution mod p."""
    a_arr = np.ascontiguousarray(a, dtype=np.int64)
    b_arr = np.ascontiguousarray(b, dtype=np.int64)
    cdef long[::1] av = a_arr
    cdef long[::1] bv = b_arr
    cdef Py_ssize_t la = av.shape[0], lb = bv.shape[0]
    out_arr = np.zeros(la + lb - 1, dtype=np.int64)
    cdef long[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef long ai
    for i in range(la):
        ai = av[i]
        if ai == 0:
            continue
        for j in range(lb):
            out[i + j] += ai * bv[j]
    for i in range(la + lb - 1):
        out[i] %= p
        if out[i] < 0:
            out[i] += p
    return out_arr


def poly_matmul(a, b, long p):
    """Matrix product of flat-polynomial matrices, entries convolved mod p."""
    a_arr = np.ascontiguousarray(a, dtype=np.int64)
    b_arr = np.ascontiguousarray(b, dtype=np.int64)
    cdef long[:, :, ::1] av = a_arr
    cdef long[:, :, ::1] bv = b_arr
    cdef Py_ssize_t ra = av.shape[0], ca = av.shape[1], l1 = av.shape[2]
    cdef Py_ssize_t cb = bv.shape[1], l2 = bv.shape[2]
    out_arr = np.zeros((ra, cb, l1 + l2 - 1), dtype=np.int64)
    cdef long[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, k, s, t
    cdef long coeff
    for i in range(ra):
        for j in range(cb):
            for k in range(ca):
                for s in range(l1):
                    coeff = av[i, k, s]
                    if coeff == 0:
                        continue
                    for t in range(l2):
                        out[i, j, s + t] += coeff * bv[k, j, t]
            for s in range(l1 + l2 - 1):
                out[i, j, s] %= p
                if out[i, j, s] < 0:
                    out[i, j, s] += p
    return out_arr
