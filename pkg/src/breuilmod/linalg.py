"""Exact linear algebra over F_p built on the kernel backend.

All systems in the package are flattened to F_p; matrices are int64 numpy
arrays with entries in [0, p).
"""

from __future__ import annotations

import numpy as np

from ._accel import rref_mod


def rank_mod(mat: np.ndarray, p: int) -> int:
    if mat.size == 0:
        return 0
    _, pivots = rref_mod(mat, p)
    return len(pivots)


def nullspace_mod(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel, returned as columns of an (n, k) array."""
    mat = np.asarray(mat, dtype=np.int64)
    rows, cols = mat.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    red, pivots = rref_mod(mat, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for idx, c in enumerate(free):
        basis[c, idx] = 1
        for row, pc in enumerate(pivots):
            basis[pc, idx] = (-red[row, c]) % p
    return basis


def solve_affine_mod(mat: np.ndarray, rhs: np.ndarray, p: int):
    """Solve mat @ x = rhs over F_p.

    Returns (particular, nullspace_basis) or None when inconsistent.
    """
    mat = np.asarray(mat, dtype=np.int64)
    rhs = np.asarray(rhs, dtype=np.int64) % p
    rows, cols = mat.shape
    aug = np.concatenate([mat % p, rhs.reshape(rows, 1)], axis=1)
    red, pivots = rref_mod(aug, p)
    if cols in pivots:
        return None
    particular = np.zeros(cols, dtype=np.int64)
    for row, pc in enumerate(pivots):
        particular[pc] = red[row, cols]
    return particular, nullspace_mod(mat, p)


def _sweep_singletons(mat, rhs, p):
    """Eliminate rows with a single nonzero coefficient.

    Returns (mat, rhs, assignments dict col -> value, alive column index array)
    or None when an inconsistency 0 = b is detected.
    """
    mat = np.array(mat, dtype=np.int64) % p
    rhs = np.array(rhs, dtype=np.int64) % p
    ncols = mat.shape[1]
    assignments: dict[int, int] = {}
    col_index = np.arange(ncols)
    inv_table = np.array([0] + [pow(i, p - 2, p) for i in range(1, p)],
                         dtype=np.int64)
    while True:
        counts = np.count_nonzero(mat, axis=1)
        zero_rows = counts == 0
        if np.any(zero_rows & (rhs != 0)):
            return None
        keep = ~zero_rows
        mat, rhs = mat[keep], rhs[keep]
        counts = counts[keep]
        singles = np.nonzero(counts == 1)[0]
        if len(singles) == 0:
            break
        cols = np.argmax(mat[singles] != 0, axis=1)
        uniq_cols, first = np.unique(cols, return_index=True)
        rows_sel = singles[first]
        coeffs = mat[rows_sel, uniq_cols]
        vals = (rhs[rows_sel] * inv_table[coeffs]) % p
        # duplicate singleton rows on the same column are left in place; an
        # inconsistent pair surfaces as a zero row with nonzero rhs next pass
        for c, v in zip(uniq_cols, vals):
            assignments[int(col_index[c])] = int(v)
        if np.any(vals):
            rhs = (rhs - mat[:, uniq_cols] @ vals) % p
        keep_cols = np.ones(mat.shape[1], dtype=bool)
        keep_cols[uniq_cols] = False
        mat = mat[:, keep_cols]
        col_index = col_index[keep_cols]
    return mat, rhs, assignments, col_index


def solve_affine_pruned(mat: np.ndarray, rhs: np.ndarray, p: int):
    """Like solve_affine_mod but sweeps singleton rows first.

    The systems this package produces are mostly coefficient-kill constraints
    plus a dense core, so the sweep typically removes the bulk of the columns
    before the cubic elimination runs.
    """
    mat = np.asarray(mat, dtype=np.int64)
    ncols = mat.shape[1]
    swept = _sweep_singletons(mat, rhs, p)
    if swept is None:
        return None
    sub, sub_rhs, assignments, col_index = swept
    if sub.shape[1] == 0:
        if np.any(sub_rhs % p):
            return None
        particular = np.zeros(ncols, dtype=np.int64)
        for c, v in assignments.items():
            particular[c] = v
        return particular, np.zeros((ncols, 0), dtype=np.int64)
    solved = solve_affine_mod(sub, sub_rhs, p)
    if solved is None:
        return None
    sub_part, sub_null = solved
    particular = np.zeros(ncols, dtype=np.int64)
    particular[col_index] = sub_part
    for c, v in assignments.items():
        particular[c] = v
    basis = np.zeros((ncols, sub_null.shape[1]), dtype=np.int64)
    basis[col_index] = sub_null
    return particular, basis


def nullspace_pruned(mat: np.ndarray, p: int) -> np.ndarray:
    """Right kernel basis with the singleton sweep applied first."""
    mat = np.asarray(mat, dtype=np.int64)
    res = solve_affine_pruned(mat, np.zeros(mat.shape[0], dtype=np.int64), p)
    assert res is not None  # homogeneous systems are consistent
    return res[1]


def row_space(mat: np.ndarray, p: int) -> np.ndarray:
    """Echelon basis of the row space (nonzero rows of the rref)."""
    if mat.shape[0] == 0:
        return mat.astype(np.int64)
    red, pivots = rref_mod(mat, p)
    return red[:len(pivots)]


def intersect_row_spaces(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Echelon basis of (row space of a) intersect (row space of b)."""
    a = row_space(a, p)
    b = row_space(b, p)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    # alpha @ a = beta @ b  <=>  [a^T | -b^T] (alpha, beta)^T = 0
    stacked = np.concatenate([a.T, (-b.T) % p], axis=1)
    null = nullspace_mod(stacked, p)
    alphas = null[:a.shape[0], :]
    vecs = (alphas.T @ a) % p
    return row_space(vecs, p)


class FpSpan:
    """Incrementally maintained subspace of F_p^n in reduced echelon form."""

    def __init__(self, p: int, n: int):
        self.p = p
        self.n = n
        self.rows = np.zeros((0, n), dtype=np.int64)
        self.pivots: list[int] = []

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        v = np.asarray(vec, dtype=np.int64) % self.p
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c:
                v = (v - c * row) % self.p
        return v

    def contains(self, vec: np.ndarray) -> bool:
        return not np.any(self.reduce(vec))

    def add(self, vec: np.ndarray) -> bool:
        """Insert vec; returns False if it was already in the span."""
        v = self.reduce(vec)
        nz = np.nonzero(v)[0]
        if len(nz) == 0:
            return False
        pc = int(nz[0])
        v = (v * pow(int(v[pc]), self.p - 2, self.p)) % self.p
        if len(self.rows):
            factors = self.rows[:, pc].copy()
            touched = np.nonzero(factors)[0]
            if len(touched):
                self.rows[touched] = (self.rows[touched] - np.outer(factors[touched], v)) % self.p
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < pc:
            pos += 1
        self.rows = np.insert(self.rows, pos, v, axis=0)
        self.pivots.insert(pos, pc)
        return True

    @property
    def dim(self) -> int:
        return len(self.pivots)
