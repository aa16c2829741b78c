"""The chain ring A = F_{p^f}[u]/u^{ep} and exact matrix algebra over it.

Elements are (ep, f) int64 coefficient arrays: axis 0 indexes powers of u,
axis 1 the F_p-basis of the coefficient field.  Products go through a flat
one-variable encoding (Kronecker slots of width 2f-1) so the kernel backend
can convolve them, then fold back with the field reduction table.

A is local with maximal ideal (u, x-part...); concretely a unit is anything
with nonzero constant field coefficient, and every ideal is u^k A.  That
makes valuation-pivot elimination terminate, which smith_normal_form uses.
"""

from __future__ import annotations

import functools

import numpy as np

from ._accel import poly_conv, poly_matmul
from .errors import DivisibilityError, DomainError
from .gf import Field, FieldElem, get_field
from .linalg import rank_mod, rref_mod
from .params import GlobalParams


class ARing:
    """Context object for A = F_{p^f}[u]/u^{ep}; also the flat codec."""

    def __init__(self, params: GlobalParams):
        self.params = params
        self.p = params.p
        self.ep = params.ep
        self.f = params.f
        self.field: Field = get_field(params.p, params.f)
        self.w = 2 * self.f - 1          # Kronecker slot width
        self.flat_len = self.ep * self.w
        self._op_cache: dict = {}

    # -- raw coefficient array helpers --------------------------------------

    def zero_coeffs(self) -> np.ndarray:
        return np.zeros((self.ep, self.f), dtype=np.int64)

    def one_coeffs(self) -> np.ndarray:
        c = self.zero_coeffs()
        c[0, 0] = 1
        return c

    def u_power_coeffs(self, n: int, scalar: int = 1) -> np.ndarray:
        c = self.zero_coeffs()
        if 0 <= n < self.ep:
            c[n, 0] = scalar % self.p
        return c

    def to_flat(self, coeffs: np.ndarray) -> np.ndarray:
        """(..., ep, f) -> (..., ep*w) with each u-coefficient in its own slot."""
        shape = coeffs.shape[:-2]
        flat = np.zeros(shape + (self.ep, self.w), dtype=np.int64)
        flat[..., :self.f] = coeffs
        return flat.reshape(shape + (self.flat_len,))

    def fold(self, conv: np.ndarray) -> np.ndarray:
        """Inverse of to_flat on a raw convolution: truncate at u^{ep} and
        reduce the in-slot field polynomials by the modulus."""
        shape = conv.shape[:-1]
        buf = np.zeros(shape + (2 * self.ep * self.w,), dtype=np.int64)
        buf[..., :conv.shape[-1]] = conv
        rows = buf.reshape(shape + (2 * self.ep, self.w))[..., :self.ep, :]
        return (rows @ self.field.reduction) % self.p

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.fold(poly_conv(self.to_flat(a), self.to_flat(b), self.p))

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """(m, k, ep, f) @ (k, n, ep, f) -> (m, n, ep, f)."""
        conv = poly_matmul(self.to_flat(a), self.to_flat(b), self.p)
        return self.fold(conv)

    def matvec(self, a: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.matmul(a, v[:, None])[:, 0]

    def smul(self, c: FieldElem, arr: np.ndarray) -> np.ndarray:
        """Multiply every u-coefficient by the field element c."""
        mat = self.field.mult_matrix(c)
        return (arr @ mat.T) % self.p

    def frobenius(self, arr: np.ndarray) -> np.ndarray:
        """phi(sum w_i u^i) = sum w_i^p u^{ip}, entrywise over leading axes."""
        out = np.zeros_like(arr)
        frob = self.field.frobenius_matrix_power(1)
        top = (self.ep - 1) // self.p
        idx = np.arange(top + 1)
        out[..., idx * self.p, :] = (arr[..., idx, :] @ frob.T) % self.p
        return out

    def derivation(self, arr: np.ndarray) -> np.ndarray:
        """N(sum w_i u^i) = sum (-i) w_i u^i, the derivation with N(u) = -u."""
        scale = (-np.arange(self.ep)) % self.p
        return (arr * scale[:, None]) % self.p

    def shift_up(self, arr: np.ndarray, n: int) -> np.ndarray:
        """Multiplication by u^n (truncating at u^{ep}).  Always a fresh array."""
        out = np.zeros_like(arr)
        if n < self.ep:
            out[..., n:, :] = arr[..., :self.ep - n, :]
        return out

    def shift_down(self, arr: np.ndarray, n: int, strict: bool = True) -> np.ndarray:
        """Exact division by u^n.  With strict=True raises unless every entry
        has u-order >= n; otherwise low coefficients are discarded."""
        if n == 0:
            return arr.copy()
        if strict and np.any(arr[..., :n, :]):
            raise DivisibilityError(f"element not divisible by u^{n}")
        out = np.zeros_like(arr)
        out[..., :self.ep - n, :] = arr[..., n:, :]
        return out

    def ord_u(self, coeffs: np.ndarray) -> int:
        """Least exponent with nonzero coefficient; ep for the zero element."""
        nz = np.nonzero(coeffs.any(axis=-1))[0]
        return int(nz[0]) if len(nz) else self.ep

    def vec_ord(self, vec: np.ndarray) -> int:
        """Minimum ord_u over the entries of a vector (d, ep, f)."""
        return min(self.ord_u(c) for c in vec)

    def identity_mat(self, d: int) -> np.ndarray:
        out = np.zeros((d, d, self.ep, self.f), dtype=np.int64)
        for i in range(d):
            out[i, i] = self.one_coeffs()
        return out

    # -- units ---------------------------------------------------------------

    def is_unit(self, coeffs: np.ndarray) -> bool:
        return bool(np.any(coeffs[0]))

    def inv_unit(self, coeffs: np.ndarray) -> np.ndarray:
        """Inverse of a unit by Newton iteration x <- x(2 - a x)."""
        if not self.is_unit(coeffs):
            raise DomainError("not a unit of A (zero constant coefficient)")
        c0 = self.field.elem(coeffs[0].tolist())
        x = self.zero_coeffs()
        x[0] = np.array(c0.inverse().coeffs, dtype=np.int64)
        two = 2 % self.p
        for _ in range(max(1, self.ep.bit_length())):
            ax = self.mul(coeffs, x)
            corr = (-ax) % self.p
            corr[0, 0] = (corr[0, 0] + two) % self.p
            x = self.mul(x, corr)
        return x

    def const_block_matrix(self, mat: np.ndarray) -> np.ndarray:
        """F_p block matrix (d*f x d*f) of the constant-coefficient k-matrix,
        acting on column vectors over k flattened by f-blocks."""
        d0, d1 = mat.shape[0], mat.shape[1]
        out = np.zeros((d0 * self.f, d1 * self.f), dtype=np.int64)
        for i in range(d0):
            for j in range(d1):
                c = self.field.elem(mat[i, j, 0].tolist())
                out[i * self.f:(i + 1) * self.f, j * self.f:(j + 1) * self.f] = \
                    self.field.mult_matrix(c)
        return out

    def mat_is_invertible(self, mat: np.ndarray) -> bool:
        d = mat.shape[0]
        if mat.shape[1] != d:
            return False
        return rank_mod(self.const_block_matrix(mat), self.p) == d * self.f

    def mat_inverse(self, mat: np.ndarray) -> np.ndarray:
        """Inverse over A: invert the constant block over k, then Newton lift."""
        d = mat.shape[0]
        block = self.const_block_matrix(mat)
        red, pivots = rref_mod(np.concatenate(
            [block, np.eye(d * self.f, dtype=np.int64)], axis=1), self.p)
        if len(pivots) != d * self.f or pivots != list(range(d * self.f)):
            raise DomainError("matrix is not invertible over A")
        binv = red[:, d * self.f:]
        x0 = np.zeros_like(mat)
        for i in range(d):
            for j in range(d):
                # first column of the (i, j) multiplication block
                x0[i, j, 0] = binv[i * self.f:(i + 1) * self.f, j * self.f]
        x = x0
        ident = self.identity_mat(d)
        for _ in range(max(1, self.ep.bit_length())):
            corr = (2 * ident - self.matmul(mat, x)) % self.p
            x = self.matmul(x, corr)
        return x

    # -- flattened F_p operator matrices (dimension D = ep*f) ----------------

    @property
    def dim(self) -> int:
        return self.ep * self.f

    def _cached(self, key, builder):
        if key not in self._op_cache:
            self._op_cache[key] = builder()
        return self._op_cache[key]

    def phi_operator(self) -> np.ndarray:
        """D x D matrix of the semilinear ring Frobenius on coefficients."""
        def build():
            D = self.dim
            out = np.zeros((D, D), dtype=np.int64)
            frob = self.field.frobenius_matrix_power(1)
            for i in range(self.ep):
                if self.p * i >= self.ep:
                    break
                r0, c0 = self.p * i * self.f, i * self.f
                out[r0:r0 + self.f, c0:c0 + self.f] = frob
            return out
        return self._cached("phi", build)

    def derivation_operator(self) -> np.ndarray:
        def build():
            scale = np.repeat((-np.arange(self.ep)) % self.p, self.f)
            return np.diag(scale).astype(np.int64)
        return self._cached("na", build)

    def shift_up_operator(self, n: int) -> np.ndarray:
        def build():
            D = self.dim
            out = np.zeros((D, D), dtype=np.int64)
            for i in range(self.ep - n):
                out[(i + n) * self.f:(i + n + 1) * self.f, i * self.f:(i + 1) * self.f] = \
                    np.eye(self.f, dtype=np.int64)
            return out
        return self._cached(("up", n), build)

    def shift_down_operator(self, n: int) -> np.ndarray:
        """Coefficient matrix of exact division by u^n; the dropped low part
        must be forced to zero by separate constraint rows."""
        def build():
            D = self.dim
            out = np.zeros((D, D), dtype=np.int64)
            for i in range(n, self.ep):
                out[(i - n) * self.f:(i - n + 1) * self.f, i * self.f:(i + 1) * self.f] = \
                    np.eye(self.f, dtype=np.int64)
            return out
        return self._cached(("down", n), build)

    def mult_operator(self, coeffs: np.ndarray) -> np.ndarray:
        """D x D matrix of multiplication by the element with given coefficients."""
        key = ("mul", coeffs.tobytes())
        cached = self._op_cache.get(key)
        if cached is not None:
            return cached
        D = self.dim
        out = np.zeros((D, D), dtype=np.int64)
        nz = np.nonzero(coeffs.any(axis=-1))[0]
        for i in nz:
            mm = self.field.mult_matrix(self.field.elem(coeffs[i].tolist()))
            for j in range(self.ep - i):
                out[(i + j) * self.f:(i + j + 1) * self.f, j * self.f:(j + 1) * self.f] += mm
        out %= self.p
        if len(self._op_cache) < 4096:
            self._op_cache[key] = out
        return out

    def embed_coeffs(self, coeffs: np.ndarray, big: "ARing",
                     emb: np.ndarray) -> np.ndarray:
        """Map (..., ep, f) arrays through a field embedding matrix (F x f)."""
        out = np.zeros(coeffs.shape[:-1] + (big.f,), dtype=np.int64)
        out[...] = (coeffs @ emb.T) % self.p
        return out


@functools.lru_cache(maxsize=None)
def get_aring(params: GlobalParams) -> ARing:
    return ARing(params)


# ---------------------------------------------------------------------------
# value wrappers


class APoly:
    """Immutable element of A = F_{p^f}[u]/u^{ep}."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: ARing, coeffs):
        self.ring = ring
        arr = np.array(coeffs, dtype=np.int64) % ring.p
        if arr.shape != (ring.ep, ring.f):
            raise DomainError(
                f"coefficient array must have shape ({ring.ep}, {ring.f})")
        arr.flags.writeable = False
        self.coeffs = arr

    # constructors
    @classmethod
    def zero(cls, ring):
        return cls(ring, ring.zero_coeffs())

    @classmethod
    def one(cls, ring):
        return cls(ring, ring.one_coeffs())

    @classmethod
    def u_power(cls, ring, n, scalar=1):
        return cls(ring, ring.u_power_coeffs(n, scalar))

    @classmethod
    def from_field_elems(cls, ring, elems):
        arr = ring.zero_coeffs()
        for i, el in enumerate(elems):
            arr[i] = np.array(ring.field.coerce(el).coeffs, dtype=np.int64)
        return cls(ring, arr)

    def __add__(self, other):
        return APoly(self.ring, (self.coeffs + other.coeffs) % self.ring.p)

    def __sub__(self, other):
        return APoly(self.ring, (self.coeffs - other.coeffs) % self.ring.p)

    def __neg__(self):
        return APoly(self.ring, (-self.coeffs) % self.ring.p)

    def __mul__(self, other):
        if isinstance(other, FieldElem):
            return APoly(self.ring, self.ring.smul(other, self.coeffs))
        return APoly(self.ring, self.ring.mul(self.coeffs, other.coeffs))

    def ord_u(self) -> int:
        return self.ring.ord_u(self.coeffs)

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.coeffs)

    def inverse(self) -> "APoly":
        return APoly(self.ring, self.ring.inv_unit(self.coeffs))

    def frobenius(self) -> "APoly":
        return APoly(self.ring, self.ring.frobenius(self.coeffs))

    def derivation(self) -> "APoly":
        return APoly(self.ring, self.ring.derivation(self.coeffs))

    def try_divide_by_u_power(self, n: int) -> "APoly":
        return APoly(self.ring, self.ring.shift_down(self.coeffs, n))

    def shift_up(self, n: int) -> "APoly":
        return APoly(self.ring, self.ring.shift_up(self.coeffs, n))

    def coeff(self, i: int) -> FieldElem:
        return self.ring.field.elem(self.coeffs[i].tolist())

    def __eq__(self, other):
        return isinstance(other, APoly) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        terms = []
        for i in range(self.ring.ep):
            if self.coeffs[i].any():
                c = self.coeffs[i].tolist()
                cs = str(c[0]) if self.ring.f == 1 else str(tuple(c))
                terms.append(f"{cs}*u^{i}" if i else cs)
        return " + ".join(terms) if terms else "0"


class AMatrix:
    """Immutable rectangular matrix over A."""

    __slots__ = ("ring", "array")

    def __init__(self, ring: ARing, array):
        self.ring = ring
        arr = np.array(array, dtype=np.int64) % ring.p
        if arr.ndim != 4 or arr.shape[2:] != (ring.ep, ring.f):
            raise DomainError("matrix array must have shape (rows, cols, ep, f)")
        arr.flags.writeable = False
        self.array = arr

    @classmethod
    def identity(cls, ring, d):
        return cls(ring, ring.identity_mat(d))

    @classmethod
    def zeros(cls, ring, rows, cols):
        return cls(ring, np.zeros((rows, cols, ring.ep, ring.f), dtype=np.int64))

    @classmethod
    def from_entries(cls, ring, entries):
        """Build from a nested list of APoly."""
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        arr = np.zeros((rows, cols, ring.ep, ring.f), dtype=np.int64)
        for i in range(rows):
            for j in range(cols):
                arr[i, j] = entries[i][j].coeffs
        return cls(ring, arr)

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    def entry(self, i: int, j: int) -> APoly:
        return APoly(self.ring, self.array[i, j])

    def __add__(self, other):
        return AMatrix(self.ring, (self.array + other.array) % self.ring.p)

    def __sub__(self, other):
        return AMatrix(self.ring, (self.array - other.array) % self.ring.p)

    def __neg__(self):
        return AMatrix(self.ring, (-self.array) % self.ring.p)

    def __matmul__(self, other):
        return AMatrix(self.ring, self.ring.matmul(self.array, other.array))

    def is_invertible(self) -> bool:
        return self.ring.mat_is_invertible(self.array)

    def inverse(self) -> "AMatrix":
        return AMatrix(self.ring, self.ring.mat_inverse(self.array))

    def frobenius(self) -> "AMatrix":
        return AMatrix(self.ring, self.ring.frobenius(self.array))

    def derivation(self) -> "AMatrix":
        return AMatrix(self.ring, self.ring.derivation(self.array))

    def __eq__(self, other):
        return isinstance(other, AMatrix) and np.array_equal(self.array, other.array)

    def __hash__(self):
        return hash(self.array.tobytes())

    def is_zero(self) -> bool:
        return not np.any(self.array)

    def __repr__(self):
        lines = []
        for i in range(self.rows):
            lines.append("[" + ", ".join(repr(self.entry(i, j)) for j in range(self.cols)) + "]")
        return "AMatrix[\n " + "\n ".join(lines) + "\n]"


# ---------------------------------------------------------------------------
# Smith normal form over the chain ring


def smith_normal_form(mat: AMatrix) -> tuple[AMatrix, list[int], AMatrix]:
    """Diagonalize over A: returns (U, exponents, V) with U @ mat @ V diagonal,
    diagonal entries u^{a_1} | u^{a_2} | ..., exponents ascending in [0, ep]
    (ep encodes a zero diagonal entry).

    A is a quotient of the discrete valuation ring k[u]_(u), so picking a
    pivot of globally minimal u-order and clearing with exact divisions
    terminates in min(rows, cols) steps.
    """
    ring = mat.ring
    U, exps, V, _ = _smith_engine(ring, mat.array.copy(), want_u=True, want_v=True)
    return AMatrix(ring, U), exps, AMatrix(ring, V)


def _smith_engine(ring: ARing, work: np.ndarray, want_u: bool, want_v: bool):
    rows, cols = work.shape[0], work.shape[1]
    ep = ring.ep
    U = ring.identity_mat(rows) if want_u else None
    V = ring.identity_mat(cols) if want_v else None
    k = min(rows, cols)
    exps: list[int] = []
    for t in range(k):
        best = None
        best_ord = ep
        for i in range(t, rows):
            for j in range(t, cols):
                o = ring.ord_u(work[i, j])
                if o < best_ord:
                    best_ord, best = o, (i, j)
                    if o == 0:
                        break
            if best_ord == 0:
                break
        if best is None:
            exps.extend([ep] * (k - t))
            break
        i, j = best
        if i != t:
            work[[t, i]] = work[[i, t]]
            if want_u:
                U[[t, i]] = U[[i, t]]
        if j != t:
            work[:, [t, j]] = work[:, [j, t]]
            if want_v:
                V[:, [t, j]] = V[:, [j, t]]
        v = best_ord
        unit_inv = ring.inv_unit(ring.shift_down(work[t, t], v))
        work[t] = ring.matmul(unit_inv[None, None], work[t][None])[0]
        if want_u:
            U[t] = ring.matmul(unit_inv[None, None], U[t][None])[0]
        # clear the pivot column with row operations
        for i in range(rows):
            if i == t or not np.any(work[i, t]):
                continue
            q = ring.shift_down(work[i, t], v)
            qrow = ring.matmul(q[None, None], work[t][None])[0]
            work[i] = (work[i] - qrow) % ring.p
            if want_u:
                qrow = ring.matmul(q[None, None], U[t][None])[0]
                U[i] = (U[i] - qrow) % ring.p
        # now column t is u^v at the pivot only; clear the pivot row
        for j in range(cols):
            if j == t or not np.any(work[t, j]):
                continue
            q = ring.shift_down(work[t, j], v)
            qcol = ring.matmul(work[:, t][:, None], q[None, None])[:, 0]
            work[:, j] = (work[:, j] - qcol) % ring.p
            if want_v:
                qcol = ring.matmul(V[:, t][:, None], q[None, None])[:, 0]
                V[:, j] = (V[:, j] - qcol) % ring.p
        exps.append(v)
    return U, exps, V, work


def smith_exponents(mat: AMatrix) -> list[int]:
    """Just the diagonal exponents, skipping the transform bookkeeping."""
    _, exps, _, _ = _smith_engine(mat.ring, mat.array.copy(), want_u=False, want_v=False)
    return exps


def column_generators(ring: ARing, mat: np.ndarray) -> np.ndarray:
    """Reduce a (d, g, ep, f) array by column operations to at most d columns
    with the same A-column-span.  Used to shrink large generating sets before
    running the Smith elimination."""
    work = mat.copy()
    rows = work.shape[0]
    pivot_cols: list[int] = []
    for i in range(rows):
        cand = [j for j in range(work.shape[1]) if j not in pivot_cols]
        best, best_ord = None, ring.ep
        for j in cand:
            o = ring.ord_u(work[i, j])
            if o < best_ord:
                best_ord, best = o, j
        if best is None or best_ord == ring.ep:
            continue
        unit_inv = ring.inv_unit(ring.shift_down(work[i, best], best_ord))
        work[:, best] = ring.matmul(work[:, best][:, None], unit_inv[None, None])[:, 0]
        for j in cand:
            if j == best or not np.any(work[i, j]):
                continue
            q = ring.shift_down(work[i, j], best_ord)
            qcol = ring.matmul(work[:, best][:, None], q[None, None])[:, 0]
            work[:, j] = (work[:, j] - qcol) % ring.p
        pivot_cols.append(best)
    keep = [j for j in pivot_cols if np.any(work[:, j])]
    if not keep:
        return np.zeros((rows, 0, ring.ep, ring.f), dtype=np.int64)
    return work[:, keep]
