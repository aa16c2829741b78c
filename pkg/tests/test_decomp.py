import random

import numpy as np
import pytest

from breuilmod import core
from breuilmod.aring import AMatrix, APoly, get_aring
from breuilmod.core import (direct_sum, permute_basis, random_module,
                            scalar_extend, solve_monodromy, validate,
                            validate_morphism)
from breuilmod.decomp import (is_isomorphic, is_semisimple, jordan_holder,
                              mf_membership, simple_subobject, socle)
from breuilmod.errors import DomainError
from breuilmod.linalg import intersect_row_spaces, row_space
from breuilmod.params import GlobalParams
from breuilmod.simples import SimpleDescriptor, enumerate_simples, make_simple

P511 = GlobalParams(5, 1, 1, 1)
P521 = GlobalParams(5, 2, 1, 1)


def msimple(digits, params=P511):
    return make_simple(SimpleDescriptor(params, digits))


def prop333_module():
    ring = get_aring(P521)
    G = AMatrix.from_entries(ring, [
        [APoly.zero(ring), APoly.one(ring)],
        [APoly.one(ring), APoly.u_power(ring, 1)]])
    return next(iter(solve_monodromy(P521, (0, 2), G)))


# ---------------------------------------------------------------------------
# membership criteria


def test_mf_simples_all_true():
    for dgs in [(0,), (1,), (0, 1)]:
        assert mf_membership(msimple(dgs)) == (True, True, True)


def test_mf_everything_at_e_r_one():
    rng = random.Random(20)
    for _ in range(15):
        M = random_module(P511, rng.randrange(1, 4), rng)
        assert mf_membership(M) == (True, True, True)


def test_mf_prop333_all_false():
    assert mf_membership(prop333_module()) == (False, False, False)


# ---------------------------------------------------------------------------
# simple subobjects


def test_simple_subobject_of_simple_is_itself():
    M = msimple((1, 0))
    S, inc, desc = simple_subobject(M)
    assert sorted(desc.canonical().digits) == [0, 1]
    assert S.rank == 2
    assert validate_morphism(inc).ok
    assert inc.matrix.is_invertible()


def test_simple_subobject_of_direct_sum():
    M = direct_sum(msimple((0,)), msimple((1,)))
    S, inc, desc = simple_subobject(M)
    assert desc.digits in ((0,), (1,))
    assert S.rank == 1
    assert validate_morphism(inc).ok


def test_simple_subobject_properties_on_random_semisimples():
    rng = random.Random(21)
    for params in (P511, P521):
        pool = [d for h in (1, 2) for d in enumerate_simples(params, h)]
        for _ in range(6):
            parts = rng.sample(pool, k=min(2, len(pool)))
            M = make_simple(parts[0])
            for d in parts[1:]:
                M = direct_sum(M, make_simple(d))
            P = core.random_fil_compatible_automorphism(M, rng)
            Mc, _ = core.conjugate(M, P)
            S, inc, desc = simple_subobject(Mc)
            assert validate(S).ok
            assert mf_membership(S) == (True, True, True)
            assert S.Nmat.is_zero()
            assert desc.period <= Mc.rank
            assert validate_morphism(inc).ok
            # the extracted class really occurs among the summands
            assert any(sorted(desc.canonical().digits) ==
                       sorted(d.canonical().digits) for d in parts)


def test_simple_subobject_needs_twist_extension():
    # rank 1 with G = 2: isomorphic to the standard class only after
    # extending the coefficients, since 2 is not a (p-1)-th power in F_5
    ring = get_aring(P511)
    G = AMatrix.from_entries(ring, [[APoly.from_field_elems(ring, [2])]])
    M = core.BreuilModule(P511, (0,), G, AMatrix.zeros(ring, 1, 1))
    assert validate(M).ok
    S, inc, desc = simple_subobject(M)
    assert desc.digits == (0,)
    assert desc.params.f == 4  # the twist of order 4 needs F_{5^4}
    assert validate_morphism(inc).ok


def test_simple_subobject_rejects_zero():
    with pytest.raises(DomainError):
        simple_subobject(core.zero_module(P511))


# ---------------------------------------------------------------------------
# composition series


def test_jh_examples():
    assert jordan_holder(direct_sum(msimple((0,)), msimple((0,)))
                         ).factor_multiset() == [(0,), (0,)]
    assert jordan_holder(msimple((0, 1))).factor_multiset() == [(0, 1)]
    M = direct_sum(msimple((0,)), msimple((1,)))
    assert jordan_holder(M).factor_multiset() == [(0,), (1,)]


def test_jh_length_additivity_random():
    rng = random.Random(22)
    for params in (P511, P521, GlobalParams(7, 1, 2, 1)):
        for _ in range(8):
            M = random_module(params, rng.randrange(1, 4), rng)
            rep = jordan_holder(M)
            assert sum(d.period for d in rep.factors) == M.rank


def test_jh_invariant_under_base_change_and_permutation():
    rng = random.Random(23)
    for params in (P511, P521):
        M = random_module(params, 3, rng)
        base = jordan_holder(M).factor_multiset()
        for _ in range(6):
            P = core.random_fil_compatible_automorphism(M, rng)
            Mc, _ = core.conjugate(M, P)
            assert jordan_holder(Mc).factor_multiset() == base
        perm = [2, 0, 1]
        assert jordan_holder(permute_basis(M, perm)).factor_multiset() == base


def test_jh_invariant_under_scalar_extension():
    rng = random.Random(24)
    M = random_module(P521, 2, rng)
    assert (jordan_holder(M).factor_multiset()
            == jordan_holder(scalar_extend(M, 2)).factor_multiset())


def test_jh_of_iterated_extensions():
    # build a non-split-looking object by conjugating a sum and re-solving N
    rng = random.Random(25)
    for _ in range(5):
        A = msimple((0,))
        B = msimple((1,))
        S = direct_sum(direct_sum(A, B), msimple((0,)))
        P = core.random_fil_compatible_automorphism(S, rng)
        Sc, _ = core.conjugate(S, P)
        assert jordan_holder(Sc).factor_multiset() == [(0,), (0,), (1,)]


# ---------------------------------------------------------------------------
# socle and semisimplicity


def test_socle_of_semisimple_is_everything():
    M = direct_sum(msimple((0,)), msimple((1,)))
    assert socle(M).rank == 2
    assert is_semisimple(M)
    assert socle(msimple((0, 1))).rank == 2
    assert is_semisimple(msimple((0, 1)))


def test_socle_detects_non_semisimple():
    # search validated rank-2 objects for one with a rank-1 socle; objects
    # with no map from any standard class at all (unramified twists) show up
    # as rank 0 and are skipped
    rng = random.Random(26)
    found = None
    for _ in range(80):
        M = random_module(P511, 2, rng)
        S = socle(M)
        assert S.rank in (0, 1, 2)
        if S.rank == 1:
            found = (M, S)
            break
    assert found is not None, "no non-semisimple rank-2 object found"
    M, S = found
    assert not is_semisimple(M)
    assert validate(S).ok
    # its composition series still has two factors
    assert jordan_holder(M).length == 2


def test_is_semisimple_agrees_with_sum_of_factors():
    rng = random.Random(27)
    for _ in range(10):
        M = random_module(P511, 2, rng)
        rep = jordan_holder(M)
        Ssum = make_simple(rep.factors[0])
        for d in rep.factors[1:]:
            Ssum = direct_sum(Ssum, make_simple(d))
        iso = is_isomorphic(M, Ssum)
        assert iso is not None
        assert iso == is_semisimple(M)


# ---------------------------------------------------------------------------
# the two candidate filtrations on an extracted subobject


def test_subobject_filtration_comparison():
    """Compare the adopted subobject filtration Fil M \\cap K against the
    alternative prescription sum_{i=1}^{p-1} (u^i im(phi) \\cap K).

    The run records, per sample, whether the two coincide; they need not
    (the sum prescription is not even contained in the intersection on
    general inputs), which is why the intersection form is what kernel()
    and the extraction use throughout."""
    rng = random.Random(28)
    stats = {"equal": 0, "different": 0}
    for params in (P511, P521):
        for _ in range(6):
            M = random_module(params, 2, rng)
            S, inc, desc = simple_subobject(M)
            Mx = inc.target
            ringx = Mx.ring
            cols = inc.matrix.array
            sub_rows = core._module_span_rows(Mx, cols)
            fil_cap = intersect_row_spaces(Mx.fil_span_rows(), sub_rows, ringx.p)
            pieces = []
            for i in range(1, params.p):
                vecs = []
                for t in range(Mx.rank):
                    for c in range(params.e):
                        if i + params.p * c >= ringx.ep:
                            continue
                        sh = ringx.shift_up(Mx.G.array[:, t], i + params.p * c)
                        for l in range(ringx.f):
                            co = [0] * ringx.f
                            co[l] = 1
                            vecs.append(ringx.smul(ringx.field.elem(co), sh).reshape(-1))
                mi_rows = row_space(np.array(vecs, dtype=np.int64), ringx.p)
                pieces.append(intersect_row_spaces(mi_rows, sub_rows, ringx.p))
            stacked = np.concatenate([q for q in pieces if q.shape[0]] or
                                     [np.zeros((0, fil_cap.shape[1]), dtype=np.int64)])
            alt = row_space(stacked, ringx.p)
            same = (alt.shape == fil_cap.shape and np.array_equal(alt, fil_cap))
            stats["equal" if same else "different"] += 1
    assert stats["equal"] + stats["different"] == 12
    # the adopted filtration is part of a validated object either way
    # (extraction asserted that); the comparison itself is informational
    print(f"subobject filtration comparison: {stats}")
