"""Decomposition theory: simple subobjects, composition series, socle.

The extraction walks the normalized-Frobenius chain of a monodromy-killed
start vector, finds the first linear dependence of the reductions mod u^p,
lifts it to an exact relation by successive u^p-order corrections, and then
splits off a cyclic subobject.  A clean chain (relation indices compatible
with the exact period of its exponent cycle) decomposes over the algebraic
closure into copies of one simple class, which is what the composition
series bookkeeping needs; producing the normalized simple subobject itself
additionally solves a semilinear fixed-point equation and may require a
coefficient-field extension.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .aring import AMatrix
from .core import (BreuilModule, Morphism, cokernel, direct_sum, hom,
                   minimal_fil_power, phi_tilde, scalar_extend,
                   scalar_extend_morphism, solve_monodromy, validate,
                   validate_morphism, zero_module)
from .errors import DomainError, InvariantViolation
from .gf import FieldElem, embedding_matrix
from .linalg import (FpSpan, intersect_row_spaces, nullspace_pruned,
                     rank_mod, row_space, rref_mod)
from .simples import (SimpleDescriptor, enumerate_simples, exact_period,
                      make_simple, min_rotation)

__all__ = [
    "JHReport", "mf_membership", "simple_subobject", "jordan_holder",
    "socle", "is_semisimple", "is_isomorphic",
]


@dataclass
class JHReport:
    """Composition factors in extraction order plus the coefficient-field
    degree over which the semisimplification splits into the listed classes."""

    factors: list[SimpleDescriptor]
    extension_field_degree: int

    @property
    def length(self) -> int:
        return len(self.factors)

    def factor_multiset(self):
        return sorted(tuple(min_rotation(d.digits)) for d in self.factors)


# ---------------------------------------------------------------------------
# chain extraction


def _monodromy_of(M: BreuilModule, vec: np.ndarray) -> np.ndarray:
    return (M.ring.derivation(vec) + M.ring.matvec(M.Nmat.array, vec)) % M.ring.p


def _find_start(M: BreuilModule) -> np.ndarray:
    """A vector x outside uM with N(x) = 0, inside the Frobenius image.

    Solves N = 0 on the span of the Frobenius image basis x_t = G col t over
    k[u^p], strips u^p factors, and applies the normalized Frobenius once.
    """
    ring = M.ring
    d = M.rank
    p, f = ring.p, ring.f
    e = M.params.e
    W = (ring.derivation(M.G.array) + ring.matmul(M.Nmat.array, M.G.array)) % p
    cols = []
    for t in range(d):
        for c in range(e):
            shifted = ring.shift_up(W[:, t], p * c)
            for l in range(f):
                b = ring.field.from_value(p ** l)
                cols.append(ring.smul(b, shifted).reshape(-1))
    sys_mat = np.array(cols, dtype=np.int64).T  # (d*D, d*e*f)
    null = nullspace_pruned(sys_mat, p)
    if null.shape[1] == 0:
        raise InvariantViolation("monodromy has no kernel on the Frobenius image")
    q = null[:, 0].reshape(d, e, f)
    # strip the common u^p power
    shift = 0
    while not np.any(q[:, shift, :]):
        shift += 1
    y = M.zero_vector()
    for t in range(d):
        for c in range(shift, e):
            for l in range(f):
                if q[t, c, l]:
                    coeffs = [0] * f
                    coeffs[l] = int(q[t, c, l])
                    b = ring.field.elem(coeffs)
                    y = (y + ring.smul(b, ring.shift_up(M.G.array[:, t],
                                                        p * (c - shift)))) % p
    if ring.vec_ord(y) != 0:
        raise InvariantViolation("stripped monodromy-kernel vector is in uM")
    x1 = phi_tilde(M, y)
    if np.any(_monodromy_of(M, x1)):
        raise InvariantViolation("normalized Frobenius did not kill the monodromy")
    return x1


def _dependence(M: BreuilModule, chain: list[np.ndarray],
                nxt: np.ndarray) -> list[FieldElem] | None:
    """Coefficients over k with nxt = sum lam_i chain[i] modulo u^p, if any."""
    ring = M.ring
    p, f = ring.p, ring.f
    cols = []
    for x in chain:
        for l in range(f):
            coeffs = [0] * f
            coeffs[l] = 1
            b = ring.field.elem(coeffs)
            cols.append(ring.smul(b, x)[:, :p, :].reshape(-1))
    mat = np.array(cols, dtype=np.int64).T
    rhs = nxt[:, :p, :].reshape(-1)
    aug = np.concatenate([mat, rhs.reshape(-1, 1)], axis=1)
    red, pivots = rref_mod(aug, p)
    if mat.shape[1] in pivots:
        return None
    sol = np.zeros(mat.shape[1], dtype=np.int64)
    for row, pc in enumerate(pivots):
        sol[pc] = red[row, mat.shape[1]]
    lams = []
    for i in range(len(chain)):
        lams.append(ring.field.elem(sol[i * f:(i + 1) * f].tolist()))
    return lams


def _chain_round(M: BreuilModule, start: np.ndarray):
    """Build the phi-tilde chain from start, locate the first dependence of
    the reductions mod u^p, rotate past leading zero coefficients, and
    correct the start until the relation holds exactly.

    Returns (chain, lambdas) with phi_tilde(chain[-1]) = sum lambdas[i] chain[i]
    exactly and lambdas[0] != 0.
    """
    ring = M.ring
    p, e = ring.p, M.params.e
    x1 = start % p
    for _ in range(2):  # after a rotation the dependence search is redone once
        chain = [x1]
        span = FpSpan(p, M.rank * p * ring.f)
        span.add(x1[:, :p, :].reshape(-1))
        cap = M.rank * p * ring.f + 2
        while True:
            nxt = phi_tilde(M, chain[-1])
            red = nxt[:, :p, :].reshape(-1)
            if span.contains(red):
                break
            span.add(red)
            chain.append(nxt)
            if len(chain) > cap:
                raise InvariantViolation("chain exceeded the dimension bound")
        lams = _dependence(M, chain, nxt)
        if lams is None:
            raise InvariantViolation("dependence detection disagreed with span")
        lead = next(i for i, lam in enumerate(lams) if not lam.is_zero())
        if lead == 0:
            break
        x1 = chain[lead]
    else:
        raise InvariantViolation("rotation did not normalize the leading index")
    # successive approximation: make the relation exact
    inv0 = lams[0].inverse()
    for attempt in range(e + 2):
        chain = [x1]
        for _ in range(len(lams) - 1):
            chain.append(phi_tilde(M, chain[-1]))
        nxt = phi_tilde(M, chain[-1])
        defect = nxt.copy()
        for lam, x in zip(lams, chain):
            defect = (defect - ring.smul(lam, x)) % p
        if not np.any(defect):
            return chain, lams
        if ring.vec_ord(defect) < p * (attempt + 1):
            raise InvariantViolation("defect not divisible by the expected u-power")
        x1 = (x1 + ring.smul(inv0, defect)) % p
    raise InvariantViolation("successive approximation failed to converge")


def _standalone_subobject(M: BreuilModule, chain, lams) -> tuple[BreuilModule, Morphism]:
    """Package the exact chain relation as a cyclic object with a monic
    inclusion into M.  Monodromy on the chain span is zero by construction."""
    ring = M.ring
    n = len(chain)
    exps = tuple(minimal_fil_power(M, x) for x in chain)
    G = np.zeros((n, n, ring.ep, ring.f), dtype=np.int64)
    for i in range(n - 1):
        G[i + 1, i] = ring.one_coeffs()
    for i, lam in enumerate(lams):
        if not lam.is_zero():
            G[i, n - 1, 0] = np.array(lam.coeffs, dtype=np.int64)
    K = BreuilModule(M.params, exps, AMatrix(ring, G),
                     AMatrix.zeros(ring, n, n))
    incl_arr = np.zeros((M.rank, n, ring.ep, ring.f), dtype=np.int64)
    for i, x in enumerate(chain):
        incl_arr[:, i] = x
    inc = Morphism(K, M, AMatrix(ring, incl_arr))
    if not validate(K).ok or not validate_morphism(inc).ok:
        raise InvariantViolation("chain span is not a subobject")
    return K, inc


def _is_clean(K: BreuilModule, lams) -> bool:
    t0 = exact_period(K.fil_exponents)
    return all(lam.is_zero() or i % t0 == 0 for i, lam in enumerate(lams))


def _extract_clean(M: BreuilModule):
    """Iterate chain rounds until the relation is compatible with the exact
    period of the exponent cycle.  Returns (K, inclusion, lambdas); K splits
    over the algebraic closure into rank/period copies of one simple class.

    Each shifted restart either keeps the relation (moving one step along
    the cycle) or strictly shrinks its support, so the loop terminates
    within rank * support rounds.
    """
    start = _find_start(M)
    obj, incl_mat = M, None
    cap = (M.rank * M.params.p) ** 2 + 8
    for _ in range(cap):
        chain, lams = _chain_round(obj, start)
        K, inc = _standalone_subobject(obj, chain, lams)
        incl_mat = inc.matrix if incl_mat is None else incl_mat @ inc.matrix
        if _is_clean(K, lams):
            return K, Morphism(K, M, incl_mat), lams
        obj = K
        start = K.basis_vector(1)
    raise InvariantViolation("chain reduction failed to reach a clean relation")


# ---------------------------------------------------------------------------
# fixed points of the semilinear wrap and the normalized simple subobject


def _companion(field, lams, t0: int, m: int):
    """Matrix of the semilinear wrap on the class-0 basis, over `field`."""
    B = [[field.zero() for _ in range(m)] for _ in range(m)]
    for a in range(m - 1):
        B[a + 1][a] = field.one()
    for i, lam in enumerate(lams):
        if not lam.is_zero():
            B[i // t0][m - 1] = lam
    return B


def _required_extension_multiplier(field, lams, t0: int, m: int,
                                   cap: int = 4096) -> int:
    """Smallest multiplier such that the fixed points of v -> B v^(p^t0)
    acquire rational points: the wrap has them over F_{p^{t0 s0 k}} exactly
    when 1 is an eigenvalue of C^k, C the product of B over one Frobenius
    cycle of length s0 = lcm(f, t0)/t0."""
    import math as _math

    p, f1 = field.p, field.f
    B = _companion(field, lams, t0, m)

    def matmul(X, Y):
        return [[sum((X[a][c] * Y[c][b] for c in range(m)), field.zero())
                 for b in range(m)] for a in range(m)]

    def frob(X, t):
        return [[X[a][b].frobenius_power(t) for b in range(m)] for a in range(m)]

    s0 = _math.lcm(f1, t0) // t0
    C = B
    for j in range(1, s0):
        C = matmul(C, frob(B, t0 * j))
    # minimal k with det(C^k - 1) = 0, tested via the F_p block rank
    Ck = C
    for k in range(1, cap + 1):
        block = np.zeros((m * f1, m * f1), dtype=np.int64)
        for a in range(m):
            for b in range(m):
                blk = field.mult_matrix(Ck[a][b])
                if a == b:
                    blk = (blk - np.eye(f1, dtype=np.int64)) % p
                block[a * f1:(a + 1) * f1, b * f1:(b + 1) * f1] = blk
        if rank_mod(block % p, p) < m * f1:
            return _math.lcm(f1, t0) * k // f1
        Ck = matmul(Ck, C)
    raise DomainError(
        "normalization needs a coefficient-field extension beyond the cap; "
        "the object carries a large unramified twist")


def _fixed_vector(K: BreuilModule, lams, t0: int) -> np.ndarray | None:
    """Nonzero v in the span of every t0-th chain vector with Phi(v) = v,
    where Phi is phi_tilde^{t0}; None when only 0 is rational over K's field."""
    ring = K.ring
    p, f = ring.p, ring.f
    n = K.rank
    m = n // t0
    field = ring.field
    B = _companion(field, lams, t0, m)
    # solve v = B . v^(p^t0) as an F_p system in the m*f coordinates of v
    frob = field.frobenius_matrix_power(t0 % f)
    size = m * f
    sys_mat = np.zeros((size, size), dtype=np.int64)
    for a in range(m):
        sys_mat[a * f:(a + 1) * f, a * f:(a + 1) * f] += np.eye(f, dtype=np.int64)
        for b in range(m):
            if B[a][b].is_zero():
                continue
            block = (field.mult_matrix(B[a][b]) @ frob) % p
            sys_mat[a * f:(a + 1) * f, b * f:(b + 1) * f] -= block
    null = nullspace_pruned(sys_mat % p, p)
    if null.shape[1] == 0:
        return None
    coeffs = null[:, 0].reshape(m, f)
    v = K.zero_vector()
    for a in range(m):
        if coeffs[a].any():
            lamv = field.elem(coeffs[a].tolist())
            v = (v + ring.smul(lamv, K.basis_vector(a * t0))) % p
    return v


def simple_subobject(M: BreuilModule):
    """A simple subobject: (K, inclusion, descriptor) with K literally of the
    canonical cyclic form of the descriptor.

    The chain extraction happens over the base coefficient field, so the
    relation coefficients stay rational there; only the normalization of the
    cyclic generator (a semilinear fixed-point equation) may need a larger
    field, into which everything is embedded.  For relation coefficients in
    the prime field the extension by rank*(p-1) always suffices; a genuinely
    twisted object over a bigger base field can demand more and is rejected.
    """
    if M.rank == 0:
        raise DomainError("the zero module has no simple subobject")
    report = validate(M)
    if not report.ok:
        raise DomainError(f"input is not a valid object: {report.violations}")
    p = M.params.p
    K, incl, lams = _extract_clean(M)
    t0 = exact_period(K.fil_exponents)
    m = K.rank // t0
    mult = _required_extension_multiplier(K.ring.field, lams, t0, m)
    if mult * K.params.f > 64:
        raise DomainError(
            f"normalization needs coefficients in F_p^{mult * K.params.f}; "
            "the object carries a large unramified twist")
    Kx = scalar_extend(K, mult)
    if mult == 1:
        lamx = lams
    else:
        emb = embedding_matrix(p, K.params.f, Kx.params.f)
        lamx = [Kx.ring.field.elem(
            ((emb @ np.array(lam.coeffs, dtype=np.int64)) % p).tolist())
            for lam in lams]
    v = _fixed_vector(Kx, lamx, t0)
    if v is None:
        raise InvariantViolation("fixed points missing over the computed extension")
    ring = Kx.ring
    digits = Kx.fil_exponents[:t0]
    gens = [v]
    for _ in range(t0 - 1):
        gens.append(phi_tilde(Kx, gens[-1]))
    wrap = phi_tilde(Kx, gens[-1])
    if not np.array_equal(wrap, v):
        raise InvariantViolation("fixed vector is not phi-periodic")
    desc = SimpleDescriptor(Kx.params, digits)
    S = make_simple(desc)
    sub_arr = np.zeros((Kx.rank, t0, ring.ep, ring.f), dtype=np.int64)
    for i, g in enumerate(gens):
        sub_arr[:, i] = g
    inc_S = Morphism(S, Kx, AMatrix(ring, sub_arr))
    total = scalar_extend_morphism(incl, mult).compose(inc_S)
    if not validate_morphism(total).ok:
        raise InvariantViolation("extracted inclusion is not a morphism")
    return S, total, desc


# ---------------------------------------------------------------------------
# composition series


def jordan_holder(M: BreuilModule) -> JHReport:
    """Composition factors with multiplicity, by repeated clean extraction
    and cokernels.  A clean chain of rank n and exponent period t contributes
    n/t copies of its digit class (its closure splits isotypically), so no
    field extension is needed for the factor multiset."""
    report = validate(M)
    if not report.ok:
        raise DomainError(f"input is not a valid object: {report.violations}")
    factors: list[SimpleDescriptor] = []
    C = M
    while C.rank > 0:
        K, incl, _ = _extract_clean(C)
        t0 = exact_period(K.fil_exponents)
        digits = min_rotation(K.fil_exponents[:t0])
        factors.extend([SimpleDescriptor(M.params, digits)] * (K.rank // t0))
        C, _ = cokernel(incl)
    if sum(d.period for d in factors) != M.rank:
        raise InvariantViolation("factor periods do not add up to the rank")
    ext = M.params.f * math.lcm(*(d.period for d in factors)) if factors \
        else M.params.f
    return JHReport(factors, ext)


def inertia_length(M: BreuilModule) -> int:
    return jordan_holder(M).length


# ---------------------------------------------------------------------------
# Fontaine-Laffaille-type membership


def mf_membership(M: BreuilModule) -> tuple[bool, bool, bool]:
    """Three equivalent characterizations of the unramified-style subcategory:

    i)   the filtration decomposes along M = sum u^i (im phi);
    ii)  some adapted basis lies inside im phi;
    iii) the Frobenius datum admits a monodromy vanishing on im phi.

    The three are computed independently and must agree.
    """
    report = validate(M)
    if not report.ok:
        raise DomainError(f"input is not a valid object: {report.violations}")
    if M.rank == 0:
        return (True, True, True)
    ring = M.ring
    p, f, ep, e = ring.p, ring.f, ring.ep, M.params.e
    d = M.rank

    # (i) compare dim Fil with sum of dims of Fil \cap u^i M_0
    fil_rows = M.fil_span_rows()
    fil_dim = fil_rows.shape[0]
    total = 0
    for i in range(p):
        vecs = []
        for t in range(d):
            for c in range(e):
                if i + p * c >= ep:
                    continue
                shifted = ring.shift_up(M.G.array[:, t], i + p * c)
                for l in range(f):
                    coeffs = [0] * f
                    coeffs[l] = 1
                    vecs.append(ring.smul(ring.field.elem(coeffs),
                                          shifted).reshape(-1))
        rows = row_space(np.array(vecs, dtype=np.int64), p)
        inter = intersect_row_spaces(fil_rows, rows, p)
        total += inter.shape[0]
    cond_i = (total == fil_dim)

    # (ii) greedy basis compatible with F'_c = {w in span_k(x_t) : u^c w in Fil}
    jumps = []
    prev = 0
    fil_set = np.zeros((M.rank * ring.dim,), dtype=bool)
    idx = np.nonzero(fil_rows.any(axis=0))[0] if fil_dim else np.array([], dtype=int)
    fil_set[idx] = True  # fil rows are unit vectors: membership = support check
    for c in range(M.params.er + 1):
        cols = []
        for t in range(d):
            shifted = ring.shift_up(M.G.array[:, t], c)
            for l in range(f):
                coeffs = [0] * f
                coeffs[l] = 1
                cols.append(ring.smul(ring.field.elem(coeffs), shifted).reshape(-1))
        mat = np.array(cols, dtype=np.int64).T
        # u^c w in Fil <=> coordinates outside the filtration support vanish
        outside = mat[~fil_set]
        space = nullspace_pruned(outside, p) if outside.shape[0] else \
            np.eye(mat.shape[1], dtype=np.int64)
        dim_c = space.shape[1]
        jumps.extend([c] * ((dim_c - prev) // f))
        prev = dim_c
    cond_ii = (sorted(jumps) == sorted(M.fil_exponents))

    # (iii) a monodromy vanishing on the Frobenius image exists
    sols = solve_monodromy(M.params, M.fil_exponents, M.G,
                           require_zero_on_phi_image=True)
    cond_iii = sols is not None

    if not (cond_i == cond_ii == cond_iii):
        raise InvariantViolation(
            f"membership criteria disagree: {(cond_i, cond_ii, cond_iii)}")
    return (cond_i, cond_ii, cond_iii)


# ---------------------------------------------------------------------------
# socle and semisimplicity


def socle(M: BreuilModule) -> BreuilModule:
    """Sum of the images of all morphisms from the enumerated simple classes
    of period up to rank(M)."""
    S, _ = socle_with_inclusion(M)
    return S


def socle_with_inclusion(M: BreuilModule) -> tuple[BreuilModule, Morphism]:
    from .core import image  # local to avoid cycle at import time
    if M.rank == 0:
        Z = zero_module(M.params)
        return Z, Morphism(Z, M, AMatrix.zeros(M.ring, 0, 0))
    morphs = []
    for h in range(1, M.rank + 1):
        for desc in enumerate_simples(M.params, h):
            morphs.extend(hom(make_simple(desc), M))
    if not morphs:
        Z = zero_module(M.params)
        return Z, Morphism(Z, M, AMatrix.zeros(M.ring, M.rank, 0))
    src = morphs[0].source
    total = morphs[0]
    for mor in morphs[1:]:
        src2 = direct_sum(src, mor.source)
        arr = np.concatenate([total.matrix.array, mor.matrix.array], axis=1)
        total = Morphism(src2, M, AMatrix(M.ring, arr))
        src = src2
    return image(total)


def is_semisimple(M: BreuilModule) -> bool:
    return socle(M).rank == M.rank


# ---------------------------------------------------------------------------
# isomorphism testing at small scale


def is_isomorphic(X: BreuilModule, Y: BreuilModule,
                  rng: random.Random | None = None,
                  enumeration_limit: int = 4096) -> bool | None:
    """Exact at small scale: enumerate F_p-combinations of a hom basis and
    look for an invertible one; beyond the limit, 64 random samples and None
    (inconclusive) when nothing invertible shows up."""
    if X.rank != Y.rank:
        return False
    if X.rank == 0:
        return True
    fwd = hom(X, Y)
    bwd = hom(Y, X)
    if len(fwd) != len(bwd) or not fwd:
        return False if not fwd or not bwd else None
    m = len(fwd)
    p = X.params.p
    if p ** m <= enumeration_limit:
        for idx in range(1, p ** m):
            mat = np.zeros_like(fwd[0].matrix.array)
            v = idx
            for t in range(m):
                c = v % p
                v //= p
                if c:
                    mat = (mat + c * fwd[t].matrix.array) % p
            if X.ring.mat_is_invertible(mat):
                return True
        return False
    rng = rng or random.Random(0)
    for _ in range(64):
        mat = np.zeros_like(fwd[0].matrix.array)
        for t in range(m):
            mat = (mat + rng.randrange(p) * fwd[t].matrix.array) % p
        if X.ring.mat_is_invertible(mat):
            return True
    return None
