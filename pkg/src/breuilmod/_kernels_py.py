"""Pure numpy implementations of the hot kernels.

Same signatures as the compiled extension in _kernels.pyx; _accel picks one
at import time.  All matrices are int64 with entries reduced mod p.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def rref_mod(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of `mat` over F_p (Gauss-Jordan).

    Returns (R, pivot_columns); the input is not modified.
    """
    m = np.ascontiguousarray(mat, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        factors = m[:, c].copy()
        factors[r] = 0
        touched = np.nonzero(factors)[0]
        if len(touched):
            m[touched] = (m[touched] - np.outer(factors[touched], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def poly_conv(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Full 1-D convolution of int64 vectors, reduced mod p."""
    return np.convolve(np.asarray(a, dtype=np.int64),
                       np.asarray(b, dtype=np.int64)) % p


def poly_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Matrix product of matrices of flat polynomials.

    a has shape (ra, ca, L1), b has shape (ca, cb, L2); entry (i, j) of the
    result is sum_k a[i,k] * b[k,j] as polynomial convolutions, mod p.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    ra, ca, l1 = a.shape
    cb = b.shape[1]
    l2 = b.shape[2]
    out = np.zeros((ra, cb, l1 + l2 - 1), dtype=np.int64)
    for i in range(ra):
        for j in range(cb):
            acc = out[i, j]
            for k in range(ca):
                acc += np.convolve(a[i, k], b[k, j])
            out[i, j] = acc % p
    return out
