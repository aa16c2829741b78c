import itertools

import pytest

from breuilmod.core import hom, validate
from breuilmod.decomp import is_isomorphic, mf_membership
from breuilmod.errors import DomainError
from breuilmod.params import GlobalParams
from breuilmod.simples import (SimpleDescriptor, classifying_rational,
                               endomorphism_field_degree, enumerate_simples,
                               exact_period, is_shift_equivalent,
                               lyndon_count, make_simple, min_rotation)

P511 = GlobalParams(5, 1, 1, 1)


def brute_force_classes(er, h):
    """Rotation classes of exact-period-h sequences over {0..er}."""
    out = set()
    for s in itertools.product(range(er + 1), repeat=h):
        if exact_period(s) != h:
            continue
        out.add(min(s[k:] + s[:k] for k in range(h)))
    return out


def test_make_simple_examples():
    M = make_simple(SimpleDescriptor(P511, (0,)))
    assert M.rank == 1 and M.fil_exponents == (0,)
    assert validate(M).ok
    M1 = make_simple(SimpleDescriptor(P511, (1,)))
    assert M1.fil_exponents == (1,) and validate(M1).ok
    M10 = make_simple(SimpleDescriptor(P511, (1, 0)))
    assert M10.rank == 2 and validate(M10).ok


def test_descriptor_requires_exact_period():
    with pytest.raises(DomainError):
        SimpleDescriptor(P511, (1, 1))
    with pytest.raises(DomainError):
        SimpleDescriptor(P511, (2,))  # er = 1


def test_shift_equivalence():
    a = SimpleDescriptor(P511, (1, 0))
    b = SimpleDescriptor(P511, (0, 1))
    assert is_shift_equivalent(a, b)
    assert not is_shift_equivalent(SimpleDescriptor(P511, (0,)),
                                   SimpleDescriptor(P511, (1,)))


def test_shift_equivalence_agrees_with_hom_iso():
    # cross-check against the hom-based isomorphism test, h <= 3, er <= 2
    for params in (P511, GlobalParams(5, 2, 1, 1), GlobalParams(7, 1, 2, 1)):
        descs = []
        for h in (1, 2, 3):
            descs.extend(enumerate_simples(params, h))
        for a in descs:
            for b in descs:
                expected = is_shift_equivalent(a, b)
                got = is_isomorphic(make_simple(a), make_simple(b))
                assert got is expected, (a.digits, b.digits)


def test_enumeration_counts_and_order():
    assert [d.digits for d in enumerate_simples(P511, 1)] == [(0,), (1,)]
    assert [d.digits for d in enumerate_simples(P511, 2)] == [(0, 1)]
    p72 = GlobalParams(7, 1, 2, 1)
    assert len(enumerate_simples(p72, 3)) == 8 == lyndon_count(3, 3)
    for params in (P511, p72, GlobalParams(7, 3, 1, 1)):
        for h in range(1, 6):
            if (params.er + 1) ** h > 10 ** 5:
                continue
            classes = enumerate_simples(params, h)
            brute = brute_force_classes(params.er, h)
            assert len(classes) == lyndon_count(params.er + 1, h) == len(brute)
            assert set(d.digits for d in classes) == brute
            digits = [d.digits for d in classes]
            assert digits == sorted(digits)  # lexicographic output order


def test_simples_pass_validate_and_mf():
    for h in (1, 2, 3):
        for d in enumerate_simples(GlobalParams(5, 2, 1, 1), h):
            M = make_simple(d)
            assert validate(M).ok
            assert mf_membership(M) == (True, True, True)


def test_classifying_rational():
    cr = classifying_rational(SimpleDescriptor(P511, (1, 0)))
    assert (cr.numerator, cr.denominator) == (5, 24)
    cr0 = classifying_rational(SimpleDescriptor(P511, (0,)))
    assert cr0.numerator == 0
    # digit rotation is multiplication by p mod p^h - 1
    for params in (P511, GlobalParams(7, 1, 2, 1)):
        for h in (1, 2, 3):
            for d in enumerate_simples(params, h):
                a = classifying_rational(d).numerator
                mod = params.p ** h - 1
                rot = classifying_rational(d.rotate(1)).numerator
                assert rot == (a * params.p) % mod


def test_classifying_rational_injective_on_classes():
    params = GlobalParams(7, 1, 2, 1)
    seen = {}
    for h in (1, 2, 3):
        mod = params.p ** h - 1
        for d in enumerate_simples(params, h):
            a = classifying_rational(d).numerator
            canon = min((a * pow(params.p, k, mod)) % mod for k in range(h))
            key = (h, canon)
            assert key not in seen, (d.digits, seen[key])
            seen[key] = d.digits


def test_endomorphism_degrees():
    assert endomorphism_field_degree(SimpleDescriptor(P511, (0,))) == 1
    d = SimpleDescriptor(GlobalParams(5, 1, 1, 2), (1, 0))
    assert endomorphism_field_degree(d) == 2
    assert len(hom(make_simple(d), make_simple(d))) == 2
    d1 = SimpleDescriptor(P511, (1, 0))
    assert len(hom(make_simple(d1), make_simple(d1))) == 1


def test_distinct_classes_have_no_homs():
    params = GlobalParams(5, 2, 1, 1)
    descs = [d for h in (1, 2) for d in enumerate_simples(params, h)]
    mods = [make_simple(d) for d in descs]
    for i, X in enumerate(mods):
        for j, Y in enumerate(mods):
            if i != j:
                assert len(hom(X, Y)) == 0


def test_min_rotation():
    assert min_rotation((1, 0)) == (0, 1)
    assert min_rotation((2, 0, 1)) == (0, 1, 2)
    assert min_rotation((0,)) == (0,)
