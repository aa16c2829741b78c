"""Mod-p Breuil modules in adapted form and their category operations.

A module is stored as (params, rank d, fil_exponents n, G, Nmat) where the
filtration submodule is the span of u^{n_j} e_j, the Frobenius structure map
sends u^{n_j} e_j to column j of G, and the monodromy operator sends e_j to
column j of Nmat plus the coefficient derivation.  Linear maps act on column
vectors throughout.

Everything reduces to exact F_p-linear algebra: the semilinear Frobenius is
F_p-linear on coefficient vectors, so hom spaces and monodromy solution sets
are solved as flat systems over F_p.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .aring import (AMatrix, ARing, column_generators, get_aring,
                    smith_normal_form)
from .errors import (DivisibilityError, DomainError, FiltrationError,
                     InvariantViolation, NotAMorphismError)
from .gf import embedding_matrix
from .linalg import (intersect_row_spaces, nullspace_pruned, row_space,
                     solve_affine_pruned)
from .params import GlobalParams

__all__ = [
    "BreuilModule", "FilPresentation", "Morphism", "ValidationReport",
    "validate", "adapt", "eval_phi", "phi_tilde", "hom", "kernel", "cokernel",
    "image", "direct_sum", "scalar_extend", "solve_monodromy",
    "MonodromySolutions", "conjugate", "permute_basis", "random_module",
    "random_fil_compatible_automorphism",
]


# ---------------------------------------------------------------------------
# the objects


class BreuilModule:
    """Validated-on-demand object: free A-module with adapted filtration,
    Frobenius matrix G and monodromy matrix Nmat (columns convention)."""

    __slots__ = ("params", "ring", "rank", "fil_exponents", "G", "Nmat")

    def __init__(self, params: GlobalParams, fil_exponents, G: AMatrix,
                 Nmat: AMatrix):
        self.params = params
        self.ring: ARing = get_aring(params)
        self.fil_exponents = tuple(int(n) for n in fil_exponents)
        self.rank = len(self.fil_exponents)
        if G.rows != self.rank or G.cols != self.rank:
            raise DomainError("G must be a rank x rank matrix")
        if Nmat.rows != self.rank or Nmat.cols != self.rank:
            raise DomainError("Nmat must be a rank x rank matrix")
        if G.ring is not self.ring or Nmat.ring is not self.ring:
            raise DomainError("matrix coefficients live in the wrong ring")
        self.G = G
        self.Nmat = Nmat

    def __eq__(self, other):
        return (isinstance(other, BreuilModule)
                and self.params == other.params
                and self.fil_exponents == other.fil_exponents
                and self.G == other.G and self.Nmat == other.Nmat)

    def __hash__(self):
        return hash((self.params, self.fil_exponents, self.G, self.Nmat))

    def __repr__(self):
        return (f"BreuilModule(rank={self.rank}, n={self.fil_exponents}, "
                f"params={self.params})")

    def basis_vector(self, j: int) -> np.ndarray:
        v = np.zeros((self.rank, self.ring.ep, self.ring.f), dtype=np.int64)
        v[j] = self.ring.one_coeffs()
        return v

    def zero_vector(self) -> np.ndarray:
        return np.zeros((self.rank, self.ring.ep, self.ring.f), dtype=np.int64)

    def fil_span_rows(self) -> np.ndarray:
        """F_p-basis of the filtration subspace as flat row vectors; these are
        unit vectors, so the matrix is already in echelon form."""
        ring = self.ring
        D = ring.dim
        rows = []
        for j, n in enumerate(self.fil_exponents):
            for m in range(n, ring.ep):
                for l in range(ring.f):
                    r = np.zeros(self.rank * D, dtype=np.int64)
                    r[j * D + m * ring.f + l] = 1
                    rows.append(r)
        if not rows:
            return np.zeros((0, self.rank * D), dtype=np.int64)
        return np.array(rows, dtype=np.int64)


@dataclass
class FilPresentation:
    """A filtration given by generators: Fil = A-span(generators) + u^{er} M."""

    params: GlobalParams
    rank: int
    generators: list = field(default_factory=list)  # raw (rank, ep, f) arrays

    @classmethod
    def from_apoly_vectors(cls, params, vectors):
        rank = len(vectors[0]) if vectors else 0
        gens = []
        for vec in vectors:
            gens.append(np.stack([v.coeffs for v in vec]))
        return cls(params, rank, gens)


class Morphism:
    """A-linear map between modules with the same params, as a matrix acting
    on column vectors (target_rank x source_rank)."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: BreuilModule, target: BreuilModule,
                 matrix: AMatrix, check: bool = False):
        if source.params != target.params:
            raise DomainError("source and target have different params")
        if matrix.rows != target.rank or matrix.cols != source.rank:
            raise DomainError("morphism matrix has wrong shape")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            report = validate_morphism(self)
            if not report.ok:
                raise NotAMorphismError("; ".join(report.violations))

    def __call__(self, vec: np.ndarray) -> np.ndarray:
        return self.source.ring.matvec(self.matrix.array, vec)

    def compose(self, other: "Morphism") -> "Morphism":
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise DomainError("morphisms not composable")
        return Morphism(other.source, self.target, self.matrix @ other.matrix)

    def __eq__(self, o):
        return (isinstance(o, Morphism) and self.source == o.source
                and self.target == o.target and self.matrix == o.matrix)

    @classmethod
    def identity(cls, M: BreuilModule) -> "Morphism":
        return cls(M, M, AMatrix.identity(M.ring, M.rank))

    @classmethod
    def zero(cls, X: BreuilModule, Y: BreuilModule) -> "Morphism":
        return cls(X, Y, AMatrix.zeros(X.ring, Y.rank, X.rank))

    def __repr__(self):
        return f"Morphism({self.source.rank} -> {self.target.rank})"


@dataclass
class ValidationReport:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# evaluation of the structure maps


def eval_phi(M: BreuilModule, y: np.ndarray) -> np.ndarray:
    """Value of the Frobenius structure map on y, which must lie in Fil
    (coordinate j divisible by u^{n_j}).

    Writes y = sum c_j u^{n_j} e_j and returns G . phi(c); the ambiguity of
    c_j modulo u^{ep - n_j} is killed by phi since p(ep - n_j) >= ep.
    """
    ring = M.ring
    c = np.zeros_like(y)
    for j, n in enumerate(M.fil_exponents):
        try:
            c[j] = ring.shift_down(y[j], n)
        except DivisibilityError:
            raise FiltrationError(
                f"coordinate {j} not divisible by u^{n}") from None
    return ring.matvec(M.G.array, ring.frobenius(c))


def monodromy_on_phi_basis(M: BreuilModule) -> AMatrix:
    """Matrix of -N (that is c_pi N) on the basis x_j = column j of G.

    For a validated object the entries lie in k[u^p]; with the exponents
    sorted ascending the matrix is strictly lower triangular.
    """
    ring = M.ring
    W = (ring.derivation(M.G.array) + ring.matmul(M.Nmat.array, M.G.array)) % ring.p
    Ginv = M.G.inverse().array
    return AMatrix(ring, (-ring.matmul(Ginv, W)) % ring.p)


def minimal_fil_power(M: BreuilModule, x: np.ndarray) -> int:
    """Least n with u^n x in Fil; defined for any x, at most er."""
    ring = M.ring
    n = 0
    for j, nj in enumerate(M.fil_exponents):
        o = ring.ord_u(x[j])
        n = max(n, nj - o)
    return n


def phi_tilde(M: BreuilModule, x: np.ndarray) -> np.ndarray:
    """Normalized Frobenius: phi_r(u^n x) for the least n with u^n x in Fil.

    Requires x not in uM; the result is again outside uM.
    """
    ring = M.ring
    if ring.vec_ord(x) != 0:
        raise DomainError("phi_tilde requires a vector outside uM")
    n = minimal_fil_power(M, x)
    res = eval_phi(M, ring.shift_up(x, n))
    if ring.vec_ord(res) != 0:
        raise InvariantViolation("phi_tilde image fell into uM")
    return res


# ---------------------------------------------------------------------------
# validation


def validate(M: BreuilModule) -> ValidationReport:
    """Check the category axioms: exponent range, G invertible over A,
    u^e N stability of the filtration, and the Frobenius-monodromy square."""
    ring = M.ring
    er = M.params.er
    e = M.params.e
    violations = []
    for j, n in enumerate(M.fil_exponents):
        if not 0 <= n <= er:
            violations.append(f"fil_exponents[{j}] = {n} outside [0, {er}]")
    if violations:
        return ValidationReport(violations)
    if not M.G.is_invertible():
        violations.append("G is not invertible over A")
    # u^e N(Fil) inside Fil: u^{e+n_j} Nmat[i][j] must land in u^{n_i} A
    Narr = M.Nmat.array
    for j, nj in enumerate(M.fil_exponents):
        for i, ni in enumerate(M.fil_exponents):
            prod = ring.shift_up(Narr[i, j], e + nj)
            if ring.ord_u(prod) < ni:
                violations.append(
                    f"filtration not stable under u^e N at entry ({i}, {j})")
    if violations:
        return ValidationReport(violations)
    # commutation c_pi N(phi_r(y)) = phi_r(u^e N(y)) on generators, c_pi = -1
    for j, nj in enumerate(M.fil_exponents):
        g = M.G.array[:, j]
        lhs = (-(ring.derivation(g) + ring.matvec(Narr, g))) % ring.p
        narg = ring.shift_up(ring.matvec(Narr, M.basis_vector(j)), e + nj)
        narg[j] = (narg[j] - nj * ring.u_power_coeffs(e + nj)) % ring.p
        rhs = eval_phi(M, narg)
        if np.any((lhs - rhs) % ring.p):
            violations.append(f"Frobenius/monodromy square fails on generator {j}")
    return ValidationReport(violations)


def validate_morphism(m: Morphism) -> ValidationReport:
    """Exact check of filtration, Frobenius and monodromy compatibility."""
    X, Y, ring = m.source, m.target, m.source.ring
    F = m.matrix.array
    violations = []
    for j, nj in enumerate(X.fil_exponents):
        for i, ni in enumerate(Y.fil_exponents):
            if ring.ord_u(ring.shift_up(F[i, j], nj)) < ni:
                violations.append(f"filtration compatibility fails at ({i}, {j})")
    if violations:
        return ValidationReport(violations)
    for j, nj in enumerate(X.fil_exponents):
        lhs = eval_phi(Y, ring.shift_up(F[:, j], nj))
        rhs = ring.matvec(F, X.G.array[:, j])
        if np.any((lhs - rhs) % ring.p):
            violations.append(f"Frobenius compatibility fails on generator {j}")
    resid = (ring.derivation(F) + ring.matmul(Y.Nmat.array, F)
             - ring.matmul(F, X.Nmat.array)) % ring.p
    if np.any(resid):
        violations.append("monodromy compatibility fails")
    return ValidationReport(violations)


# ---------------------------------------------------------------------------
# adapted bases


def adapt(pres: FilPresentation) -> tuple[tuple[int, ...], AMatrix]:
    """Adapted basis of the filtration spanned by the presentation.

    Returns (sorted exponents, basis change P); column i of P is the new
    basis vector and Fil = sum u^{n_i} A . (P col i).  The exponent multiset
    is independent of the presentation.
    """
    params = pres.params
    ring = get_aring(params)
    d = pres.rank
    cols = [np.stack(g) if not isinstance(g, np.ndarray) else g
            for g in pres.generators]
    mat = np.zeros((d, len(cols) + d, ring.ep, ring.f), dtype=np.int64)
    for idx, c in enumerate(cols):
        mat[:, idx] = c % ring.p
    for j in range(d):
        mat[j, len(cols) + j] = ring.u_power_coeffs(params.er)
    reduced = column_generators(ring, mat)
    if reduced.shape[1] != d:
        raise InvariantViolation(
            "filtration between u^{er}M and M needs exactly rank generators")
    U, exps, _ = smith_normal_form(AMatrix(ring, reduced))
    if any(x > params.er for x in exps):
        raise InvariantViolation("adapted exponent exceeded er")
    return tuple(exps), U.inverse()


# ---------------------------------------------------------------------------
# flat F_p systems: hom spaces and monodromy solving


def _block_write(mat, D, rb, cb, op):
    mat[rb * D:(rb + 1) * D, cb * D:(cb + 1) * D] += op


def _hom_system(X: BreuilModule, Y: BreuilModule) -> np.ndarray:
    """Stacked F_p constraint matrix for matrices F with F phi = phi F,
    F(Fil X) in Fil Y and F N = N F.  Unknown layout: entry (i, j) of F is
    block i*dX + j of width D = ep*f."""
    ring = X.ring
    D = ring.dim
    dX, dY = X.rank, Y.rank
    nb = dX * dY
    p = ring.p

    mul_gy = [[ring.mult_operator(Y.G.array[l, i]) for i in range(dY)]
              for l in range(dY)]
    mul_gx = [[ring.mult_operator(X.G.array[i, j]) for j in range(dX)]
              for i in range(dX)]
    phi_op = ring.phi_operator()

    # filtration rows: coefficient kills
    fil_rows = []
    for i, ni in enumerate(Y.fil_exponents):
        for j, nj in enumerate(X.fil_exponents):
            for m in range(min(ni - nj, ring.ep)):
                base = (i * dX + j) * D + m * ring.f
                for l in range(ring.f):
                    row = np.zeros(nb * D, dtype=np.int64)
                    row[base + l] = 1
                    fil_rows.append(row)
    fil = (np.array(fil_rows, dtype=np.int64) if fil_rows
           else np.zeros((0, nb * D), dtype=np.int64))

    # Frobenius rows: for each source generator j and target component l
    frob = np.zeros((nb * D, nb * D), dtype=np.int64)
    for j, nj in enumerate(X.fil_exponents):
        up = ring.shift_up_operator(nj)
        for i, ni in enumerate(Y.fil_exponents):
            ps = (phi_op @ ring.shift_down_operator(ni) @ up) % p
            for l in range(dY):
                _block_write(frob, D, l * dX + j, i * dX + j, mul_gy[l][i] @ ps)
        for l in range(dY):
            for i in range(dX):
                _block_write(frob, D, l * dX + j, l * dX + i, -mul_gx[i][j])
    frob %= p

    # monodromy rows: derivation(F) + NY F - F NX = 0
    mono = np.zeros((nb * D, nb * D), dtype=np.int64)
    na = ring.derivation_operator()
    for i in range(dY):
        for j in range(dX):
            rb = i * dX + j
            _block_write(mono, D, rb, rb, na)
            for l in range(dY):
                op = ring.mult_operator(Y.Nmat.array[i, l])
                if op.any():
                    _block_write(mono, D, rb, l * dX + j, op)
            for l in range(dX):
                op = ring.mult_operator(X.Nmat.array[l, j])
                if op.any():
                    _block_write(mono, D, rb, i * dX + l, -op)
    mono %= p

    return np.concatenate([fil, frob, mono], axis=0)


def _hom_nullspace_zero_monodromy(X: BreuilModule, Y: BreuilModule) -> np.ndarray:
    """Nullspace of the hom system when both monodromy matrices vanish.

    The derivation and filtration constraints are then pure coefficient
    kills (entries live in k[u^p] and start at u-order n_i - n_j), so only
    the Frobenius block is assembled, restricted to the surviving columns.
    """
    ring = X.ring
    D = ring.dim
    dX, dY = X.rank, Y.rank
    nb = dX * dY
    p = ring.p
    mask = np.zeros(nb * D, dtype=bool)
    for i, ni in enumerate(Y.fil_exponents):
        for j, nj in enumerate(X.fil_exponents):
            base = (i * dX + j) * D
            for m in range(0, ring.ep, p):
                if m + nj >= ni:
                    mask[base + m * ring.f: base + m * ring.f + ring.f] = True
    cols = np.nonzero(mask)[0]
    mul_gy = [[ring.mult_operator(Y.G.array[l, i]) for i in range(dY)]
              for l in range(dY)]
    mul_gx = [[ring.mult_operator(X.G.array[i, j]) for j in range(dX)]
              for i in range(dX)]
    phi_op = ring.phi_operator()
    frob = np.zeros((nb * D, nb * D), dtype=np.int64)
    for j, nj in enumerate(X.fil_exponents):
        up = ring.shift_up_operator(nj)
        for i, ni in enumerate(Y.fil_exponents):
            ps = (phi_op @ ring.shift_down_operator(ni) @ up) % p
            for l in range(dY):
                _block_write(frob, D, l * dX + j, i * dX + j, mul_gy[l][i] @ ps)
        for l in range(dY):
            for i in range(dX):
                _block_write(frob, D, l * dX + j, l * dX + i, -mul_gx[i][j])
    sub = frob[:, cols] % p
    sub = sub[sub.any(axis=1)]
    small = nullspace_pruned(sub, p)
    basis = np.zeros((nb * D, small.shape[1]), dtype=np.int64)
    basis[cols] = small
    return basis


def hom(X: BreuilModule, Y: BreuilModule) -> list[Morphism]:
    """F_p-basis of the space of morphisms X -> Y, by exact Gaussian
    elimination of the flattened compatibility system."""
    if X.params != Y.params:
        raise DomainError("hom requires shared params")
    ring = X.ring
    if X.Nmat.is_zero() and Y.Nmat.is_zero():
        basis = _hom_nullspace_zero_monodromy(X, Y)
    else:
        basis = nullspace_pruned(_hom_system(X, Y), ring.p)
    out = []
    for idx in range(basis.shape[1]):
        arr = basis[:, idx].reshape(Y.rank, X.rank, ring.ep, ring.f)
        out.append(Morphism(X, Y, AMatrix(ring, arr)))
    return out


class MonodromySolutions:
    """Affine solution set of the monodromy system for a (rank, n, G) datum."""

    def __init__(self, module_factory, ring, particular, basis):
        self._factory = module_factory
        self.ring = ring
        self.particular = particular
        self.basis = basis

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    @property
    def count(self) -> int:
        return self.ring.p ** self.dimension

    def _to_module(self, flat) -> BreuilModule:
        return self._factory(flat)

    def sample(self, rng: random.Random) -> BreuilModule:
        coeffs = np.array([rng.randrange(self.ring.p)
                           for _ in range(self.dimension)], dtype=np.int64)
        flat = (self.particular + self.basis @ coeffs) % self.ring.p
        return self._to_module(flat)

    def __iter__(self):
        p, k = self.ring.p, self.dimension
        for idx in range(p ** k):
            coeffs = np.zeros(k, dtype=np.int64)
            v = idx
            for t in range(k):
                coeffs[t] = v % p
                v //= p
            flat = (self.particular + self.basis @ coeffs) % p
            yield self._to_module(flat)

    def __len__(self):
        return self.count


def solve_monodromy(params: GlobalParams, fil_exponents, G: AMatrix,
                    require_zero_on_phi_image: bool = False):
    """All monodromy matrices making (rank, n, G) an object of the category.

    Returns a MonodromySolutions over the affine F_p solution set, or None
    when the filtration/commutation system is unsatisfiable (the Frobenius
    datum then underlies no object).  With require_zero_on_phi_image the
    extra equations N(x_i) = 0 on the Frobenius image basis are imposed.
    """
    ring = get_aring(params)
    exps = tuple(int(n) for n in fil_exponents)
    d = len(exps)
    if not ring.mat_is_invertible(G.array):
        raise DomainError("G must be invertible over A")
    D = ring.dim
    nb = d * d
    p = ring.p
    e = params.e

    rows_list = []
    rhs_list = []

    # filtration stability kills
    for i, ni in enumerate(exps):
        for j, nj in enumerate(exps):
            for m in range(min(ni - e - nj, ring.ep)):
                base = (i * d + j) * D + m * ring.f
                for l in range(ring.f):
                    row = np.zeros(nb * D, dtype=np.int64)
                    row[base + l] = 1
                    rows_list.append(row)
                    rhs_list.append(0)
    fil = (np.array(rows_list, dtype=np.int64) if rows_list
           else np.zeros((0, nb * D), dtype=np.int64))
    fil_rhs = np.array(rhs_list, dtype=np.int64)

    # commutation: -(NA(G col j) + Nmat G col j) = G phi(shift(u^{e+n_j} N(u^{n_j} e_j)))
    mul_g = [[ring.mult_operator(G.array[a, b]) for b in range(d)] for a in range(d)]
    phi_op = ring.phi_operator()
    comm = np.zeros((nb * D, nb * D), dtype=np.int64)
    comm_rhs = np.zeros(nb * D, dtype=np.int64)
    for j, nj in enumerate(exps):
        # constant part: phi_r of -n_j u^{e+n_j} e_j  minus  -NA(G col j)
        const_vec = np.zeros((d, ring.ep, ring.f), dtype=np.int64)
        const_vec[j] = (-nj * ring.u_power_coeffs(e + nj)) % p
        rhs_const = eval_phi_with(ring, exps, G, const_vec)
        lhs_const = (-ring.derivation(G.array[:, j])) % p
        for i_out in range(d):
            rb = j * d + i_out
            # unknown on the left: -(Nmat G)_{i_out, j} = -sum_l Nmat[i_out, l] G[l, j]
            for l in range(d):
                _block_write(comm, D, rb, i_out * d + l, -mul_g[l][j])
            # unknown on the right: sum_i G[i_out, i] phi(shiftdown_{n_i}(u^{e+n_j} Nmat[i, j]))
            for i, ni in enumerate(exps):
                op = (mul_g[i_out][i] @ phi_op @ ring.shift_down_operator(ni)
                      @ ring.shift_up_operator(e + nj)) % p
                _block_write(comm, D, rb, i * d + j, -op)
            block = ((lhs_const[i_out] - rhs_const[i_out]) % p).reshape(-1)
            comm_rhs[rb * D:(rb + 1) * D] = block
    comm %= p

    blocks = [fil, comm]
    rhs = [fil_rhs, (-comm_rhs) % p]
    if require_zero_on_phi_image:
        # N(x_j) = NA(G col j) + Nmat G col j = 0
        extra = np.zeros((nb * D, nb * D), dtype=np.int64)
        extra_rhs = np.zeros(nb * D, dtype=np.int64)
        for j in range(d):
            for i_out in range(d):
                rb = j * d + i_out
                for l in range(d):
                    _block_write(extra, D, rb, i_out * d + l, mul_g[l][j])
                extra_rhs[rb * D:(rb + 1) * D] = \
                    ring.derivation(G.array[:, j])[i_out].reshape(-1)
        blocks.append(extra % p)
        rhs.append((-extra_rhs) % p)

    system = np.concatenate(blocks, axis=0)
    rhs_vec = np.concatenate(rhs)
    solved = solve_affine_pruned(system, rhs_vec, p)
    if solved is None:
        return None
    particular, basis = solved

    def factory(flat):
        arr = flat.reshape(d, d, ring.ep, ring.f)
        return BreuilModule(params, exps, G, AMatrix(ring, arr))

    return MonodromySolutions(factory, ring, particular, basis)


def eval_phi_with(ring: ARing, exps, G: AMatrix, y: np.ndarray) -> np.ndarray:
    """eval_phi for a (exps, G) datum without a constructed module."""
    c = np.zeros_like(y)
    for j, n in enumerate(exps):
        c[j] = ring.shift_down(y[j], n)
    return ring.matvec(G.array, ring.frobenius(c))


# ---------------------------------------------------------------------------
# kernels, cokernels, images


def _module_span_rows(M: BreuilModule, cols: np.ndarray) -> np.ndarray:
    """F_p row-space basis of the A-span of the given columns (d, k, ep, f)."""
    ring = M.ring
    d = M.rank
    vecs = []
    for idx in range(cols.shape[1]):
        col = cols[:, idx]
        for m in range(ring.ep):
            shifted = ring.shift_up(col, m)
            if not shifted.any():
                continue
            for l in range(ring.f):
                b = ring.field.from_value(ring.p ** l)  # basis element x^l
                vecs.append(ring.smul(b, shifted).reshape(-1))
    if not vecs:
        return np.zeros((0, d * ring.dim), dtype=np.int64)
    return row_space(np.array(vecs, dtype=np.int64), ring.p)


def _fil_intersect_submodule(M: BreuilModule, incl_cols: np.ndarray) -> np.ndarray:
    """Generators (in submodule coordinates implied by caller) of
    Fil M intersect span(incl_cols), returned as X-coordinate columns."""
    ring = M.ring
    fil_rows = M.fil_span_rows()
    sub_rows = _module_span_rows(M, incl_cols)
    inter = intersect_row_spaces(fil_rows, sub_rows, ring.p)
    k = inter.shape[0]
    cols = np.zeros((M.rank, k, ring.ep, ring.f), dtype=np.int64)
    for idx in range(k):
        cols[:, idx] = inter[idx].reshape(M.rank, ring.ep, ring.f)
    return column_generators(ring, cols)


def _adapt_submodule(ring: ARing, er: int, rank: int, gen_cols: np.ndarray):
    """Adapted exponents and basis change for a filtration-with-u^{er}
    submodule given by generator columns inside A^{rank}."""
    mat = np.zeros((rank, gen_cols.shape[1] + rank, ring.ep, ring.f), dtype=np.int64)
    mat[:, :gen_cols.shape[1]] = gen_cols
    for j in range(rank):
        mat[j, gen_cols.shape[1] + j] = ring.u_power_coeffs(er)
    reduced = column_generators(ring, mat)
    if reduced.shape[1] != rank:
        raise InvariantViolation("submodule filtration has wrong generator count")
    U, exps, _ = smith_normal_form(AMatrix(ring, reduced))
    return tuple(exps), U.inverse()


def kernel(f: Morphism) -> tuple[BreuilModule, Morphism]:
    """Kernel with the induced structure: Fil K = Fil X intersect K and the
    restricted Frobenius and monodromy.  Smith exponents of the matrix must
    be 0 or ep; anything in between means f is not a category morphism."""
    X, Y, ring = f.source, f.target, f.source.ring
    p, ep = ring.p, ring.ep
    U, exps, V = smith_normal_form(f.matrix)
    if any(0 < x < ep for x in exps):
        raise NotAMorphismError(
            f"matrix has Smith exponents {exps}; image is not free")
    s = sum(1 for x in exps if x == 0)
    dk = X.rank - s
    if dk == 0:
        Z = zero_module(X.params)
        return Z, Morphism(Z, X, AMatrix.zeros(ring, X.rank, 0))
    incl0 = V.array[:, s:]        # X-coords of a kernel basis
    gens = _fil_intersect_submodule(X, incl0)
    # pull generators back to kernel coordinates
    vinv = V.inverse().array
    gens_k = np.zeros((dk, gens.shape[1], ring.ep, ring.f), dtype=np.int64)
    for idx in range(gens.shape[1]):
        z = ring.matvec(vinv, gens[:, idx])
        if np.any(z[:s]):
            raise InvariantViolation("filtration generator fell outside the kernel")
        gens_k[:, idx] = z[s:]
    m_exps, Q = _adapt_submodule(ring, X.params.er, dk, gens_k)
    incl = ring.matmul(incl0, Q.array)   # X-coords of the adapted basis
    Gk = np.zeros((dk, dk, ring.ep, ring.f), dtype=np.int64)
    Nk = np.zeros_like(Gk)
    qinv = Q.inverse().array
    for i, mi in enumerate(m_exps):
        w = eval_phi(X, ring.shift_up(incl[:, i], mi))
        z = ring.matvec(vinv, w)
        if np.any(z[:s]):
            raise InvariantViolation("Frobenius left the kernel")
        Gk[:, i] = ring.matvec(qinv, z[s:])
        nw = (ring.derivation(incl[:, i])
              + ring.matvec(X.Nmat.array, incl[:, i])) % p
        z = ring.matvec(vinv, nw)
        if np.any(z[:s]):
            raise InvariantViolation("monodromy left the kernel")
        Nk[:, i] = ring.matvec(qinv, z[s:])
    K = BreuilModule(X.params, m_exps, AMatrix(ring, Gk), AMatrix(ring, Nk))
    inc = Morphism(K, X, AMatrix(ring, incl))
    return K, inc


def cokernel(f: Morphism) -> tuple[BreuilModule, Morphism]:
    """Cokernel with Fil C the image of Fil Y; the induced Frobenius matrix
    stays invertible, so C is again an object."""
    X, Y, ring = f.source, f.target, f.source.ring
    p = ring.p
    U, exps, V = smith_normal_form(f.matrix)
    if any(0 < x < ring.ep for x in exps):
        raise NotAMorphismError(
            f"matrix has Smith exponents {exps}; image is not free")
    s = sum(1 for x in exps if x == 0)
    dc = Y.rank - s
    if dc == 0:
        Z = zero_module(Y.params)
        return Z, Morphism(Y, Z, AMatrix.zeros(ring, 0, Y.rank))
    proj0 = U.array[s:, :]        # current C-coords: pi(y) = proj0 . y
    # filtration generators pi(u^{n_j} e_j)
    gen_cols = np.zeros((dc, Y.rank, ring.ep, ring.f), dtype=np.int64)
    for j, nj in enumerate(Y.fil_exponents):
        gen_cols[:, j] = ring.shift_up(proj0[:, j], nj)
    gen_cols = column_generators(ring, gen_cols)
    m_exps, Q = _adapt_submodule(ring, Y.params.er, dc, gen_cols)
    qinv = Q.inverse().array
    # lift each new filtration generator to Fil Y: solve for c in A^{dY} with
    # sum_j c_j u^{n_j} pi(e_j) = u^{m_i} (Q col i)
    D = ring.dim
    lift_mat = np.zeros((dc * D, Y.rank * D), dtype=np.int64)
    for l in range(dc):
        for j, nj in enumerate(Y.fil_exponents):
            op = ring.mult_operator(ring.shift_up(proj0[l, j], nj))
            lift_mat[l * D:(l + 1) * D, j * D:(j + 1) * D] = op
    Gc = np.zeros((dc, dc, ring.ep, ring.f), dtype=np.int64)
    Nc = np.zeros_like(Gc)
    for i, mi in enumerate(m_exps):
        target = ring.shift_up(ring.matvec(Q.array, _unit_vec(ring, dc, i)), mi)
        solved = solve_affine_pruned(lift_mat, target.reshape(-1), p)
        if solved is None:
            raise InvariantViolation("cokernel filtration generator has no lift")
        c = solved[0].reshape(Y.rank, ring.ep, ring.f)
        img = ring.matvec(Y.G.array, ring.frobenius(c))     # phi_r of the lift
        Gc[:, i] = ring.matvec(qinv, ring.matvec(proj0, img))
    # monodromy descends: N_C(pi(y)) = pi(N_Y(y)) with lifts U^{-1} col (s+l)
    uinv = U.inverse().array
    ncur = np.zeros((dc, dc, ring.ep, ring.f), dtype=np.int64)
    for l in range(dc):
        y = uinv[:, s + l]
        ny = (ring.derivation(y) + ring.matvec(Y.Nmat.array, y)) % p
        ncur[:, l] = ring.matvec(proj0, ny)
    Nc = ring.matmul(qinv, (ring.derivation(Q.array)
                            + ring.matmul(ncur, Q.array)) % p)
    C = BreuilModule(Y.params, m_exps, AMatrix(ring, Gc), AMatrix(ring, Nc))
    proj = Morphism(Y, C, AMatrix(ring, ring.matmul(qinv, proj0)))
    return C, proj


def _unit_vec(ring: ARing, d: int, i: int) -> np.ndarray:
    v = np.zeros((d, ring.ep, ring.f), dtype=np.int64)
    v[i] = ring.one_coeffs()
    return v


def zero_module(params: GlobalParams) -> BreuilModule:
    ring = get_aring(params)
    empty = AMatrix(ring, np.zeros((0, 0, ring.ep, ring.f), dtype=np.int64))
    return BreuilModule(params, (), empty, empty)


def image(f: Morphism) -> tuple[BreuilModule, Morphism]:
    """Image subobject of the target: kernel of the cokernel projection."""
    _, proj = cokernel(f)
    return kernel(proj)


# ---------------------------------------------------------------------------
# constructions


def direct_sum(X: BreuilModule, Y: BreuilModule) -> BreuilModule:
    if X.params != Y.params:
        raise DomainError("direct sum requires shared params")
    ring = X.ring
    d = X.rank + Y.rank
    G = np.zeros((d, d, ring.ep, ring.f), dtype=np.int64)
    N = np.zeros_like(G)
    G[:X.rank, :X.rank] = X.G.array
    G[X.rank:, X.rank:] = Y.G.array
    N[:X.rank, :X.rank] = X.Nmat.array
    N[X.rank:, X.rank:] = Y.Nmat.array
    return BreuilModule(X.params, X.fil_exponents + Y.fil_exponents,
                        AMatrix(ring, G), AMatrix(ring, N))


def summand_inclusion(X: BreuilModule, Y: BreuilModule, which: int) -> Morphism:
    """Inclusion of X (which=0) or Y (which=1) into direct_sum(X, Y)."""
    S = direct_sum(X, Y)
    ring = X.ring
    mat = np.zeros((S.rank, (X.rank if which == 0 else Y.rank),
                    ring.ep, ring.f), dtype=np.int64)
    off = 0 if which == 0 else X.rank
    for i in range(mat.shape[1]):
        mat[off + i, i] = ring.one_coeffs()
    return Morphism(X if which == 0 else Y, S, AMatrix(ring, mat))


def summand_projection(X: BreuilModule, Y: BreuilModule, which: int) -> Morphism:
    S = direct_sum(X, Y)
    ring = X.ring
    tgt = X if which == 0 else Y
    mat = np.zeros((tgt.rank, S.rank, ring.ep, ring.f), dtype=np.int64)
    off = 0 if which == 0 else X.rank
    for i in range(tgt.rank):
        mat[i, off + i] = ring.one_coeffs()
    return Morphism(S, tgt, AMatrix(ring, mat))


def scalar_extend(M: BreuilModule, m: int) -> BreuilModule:
    """Extend coefficients from F_{p^f} to F_{p^{f m}} along the canonical
    embedding; rank, exponents and validity are preserved."""
    if m < 1:
        raise DomainError("extension degree must be >= 1")
    if m == 1:
        return M
    params = M.params.with_f(M.params.f * m)
    big = get_aring(params)
    emb = embedding_matrix(M.params.p, M.params.f, params.f)
    G = M.ring.embed_coeffs(M.G.array, big, emb)
    N = M.ring.embed_coeffs(M.Nmat.array, big, emb)
    return BreuilModule(params, M.fil_exponents, AMatrix(big, G), AMatrix(big, N))


def scalar_extend_morphism(mor: Morphism, m: int) -> Morphism:
    """The same morphism after extending both ends by degree m."""
    if m == 1:
        return mor
    src = scalar_extend(mor.source, m)
    tgt = scalar_extend(mor.target, m)
    big = src.ring
    emb = embedding_matrix(mor.source.params.p, mor.source.params.f,
                           src.params.f)
    arr = mor.source.ring.embed_coeffs(mor.matrix.array, big, emb)
    return Morphism(src, tgt, AMatrix(big, arr))


def permute_basis(M: BreuilModule, perm: list[int]) -> BreuilModule:
    """Reindex the adapted basis by e'_j = e_{perm[j]}."""
    idx = np.array(perm)
    exps = tuple(M.fil_exponents[i] for i in perm)
    G = M.G.array[np.ix_(idx, idx)]
    N = M.Nmat.array[np.ix_(idx, idx)]
    return BreuilModule(M.params, exps, AMatrix(M.ring, G), AMatrix(M.ring, N))


def conjugate(M: BreuilModule, P: AMatrix) -> tuple[BreuilModule, Morphism]:
    """Base change by a filtration-compatible invertible matrix P
    (ord P[i][j] >= n_i - n_j): the new object keeps the exponents, with
    G' = P^{-1} G phi(C) where C[i][j] = u^{n_j - n_i} P[i][j], and
    N' = P^{-1}(N_A(P) + Nmat P).  Returns (M', iso M' -> M with matrix P)."""
    ring = M.ring
    d = M.rank
    n = M.fil_exponents
    C = np.zeros_like(P.array)
    for i in range(d):
        for j in range(d):
            shifted = ring.shift_up(P.array[i, j], n[j])
            if ring.ord_u(shifted) < n[i]:
                raise DomainError("base change is not filtration-compatible")
            C[i, j] = ring.shift_down(shifted, n[i])
    pinv = P.inverse().array
    Gp = ring.matmul(pinv, ring.matmul(M.G.array, ring.frobenius(C)))
    Np = ring.matmul(pinv, (ring.derivation(P.array)
                            + ring.matmul(M.Nmat.array, P.array)) % ring.p)
    Mp = BreuilModule(M.params, n, AMatrix(ring, Gp), AMatrix(ring, Np))
    return Mp, Morphism(Mp, M, P)


def random_fil_compatible_automorphism(M: BreuilModule, rng: random.Random) -> AMatrix:
    """Random invertible P with ord P[i][j] >= n_i - n_j."""
    ring = M.ring
    d = M.rank
    n = M.fil_exponents
    while True:
        arr = np.zeros((d, d, ring.ep, ring.f), dtype=np.int64)
        for i in range(d):
            for j in range(d):
                lo = max(0, n[i] - n[j])
                for m in range(lo, ring.ep):
                    for l in range(ring.f):
                        arr[i, j, m, l] = rng.randrange(ring.p)
        P = AMatrix(ring, arr)
        if P.is_invertible():
            return P


def random_invertible(ring: ARing, d: int, rng: random.Random) -> AMatrix:
    while True:
        arr = np.array([[[[rng.randrange(ring.p) for _ in range(ring.f)]
                          for _ in range(ring.ep)] for _ in range(d)]
                        for _ in range(d)], dtype=np.int64)
        P = AMatrix(ring, arr)
        if P.is_invertible():
            return P


def random_module(params: GlobalParams, rank: int, rng: random.Random,
                  max_attempts: int = 200) -> BreuilModule:
    """Random validated object: random exponents and invertible G, monodromy
    drawn uniformly from the solution set (retry when it is empty)."""
    ring = get_aring(params)
    for _ in range(max_attempts):
        exps = tuple(rng.randrange(params.er + 1) for _ in range(rank))
        G = random_invertible(ring, rank, rng)
        sols = solve_monodromy(params, exps, G)
        if sols is None:
            continue
        M = sols.sample(rng)
        report = validate(M)
        if not report.ok:
            raise InvariantViolation(
                f"monodromy solver produced an invalid object: {report.violations}")
        return M
    raise DomainError("no valid monodromy found after max_attempts draws")
