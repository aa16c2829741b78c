import random

import numpy as np
import pytest

from breuilmod.aring import (AMatrix, APoly, get_aring, smith_exponents,
                             smith_normal_form)
from breuilmod.errors import DivisibilityError, DomainError
from breuilmod.linalg import solve_affine_mod
from breuilmod.params import GlobalParams


def ring511():
    return get_aring(GlobalParams(5, 1, 1, 1))


def ring521():
    return get_aring(GlobalParams(5, 2, 1, 1))


def rand_apoly(rng, ring):
    return APoly(ring, [[rng.randrange(ring.p) for _ in range(ring.f)]
                        for _ in range(ring.ep)])


def rand_matrix(rng, ring, r, c):
    return AMatrix.from_entries(
        ring, [[rand_apoly(rng, ring) for _ in range(c)] for _ in range(r)])


def rand_invertible(rng, ring, d):
    while True:
        m = rand_matrix(rng, ring, d, d)
        if m.is_invertible():
            return m


def test_frobenius_of_u():
    # phi(sum w_i u^i) = sum w_i^p u^{ip}
    r = ring521()
    u = APoly.u_power(r, 1)
    assert u.frobenius() == APoly.u_power(r, 5)
    # e=1, p=5: u^2 -> u^10 = 0
    r1 = ring511()
    assert APoly.u_power(r1, 2).frobenius().is_zero()


def test_units():
    r = ring511()
    one_plus_u = APoly.one(r) + APoly.u_power(r, 1)
    assert one_plus_u.is_unit()
    assert not APoly.u_power(r, 1).is_unit()
    inv = one_plus_u.inverse()
    assert one_plus_u * inv == APoly.one(r)


def test_inverse_cross_check_with_linear_solve():
    # Newton inverse against a straight F_p linear solve of a x = 1
    r = ring521()
    rng = random.Random(4)
    for _ in range(20):
        a = rand_apoly(rng, r)
        if not a.is_unit():
            continue
        op = r.mult_operator(a.coeffs)
        rhs = np.zeros(r.dim, dtype=np.int64)
        rhs[0] = 1
        part, _ = solve_affine_mod(op, rhs, r.p)
        via_solve = APoly(r, part.reshape(r.ep, r.f))
        assert a.inverse() == via_solve


def test_derivation():
    r = ring521()
    u = APoly.u_power(r, 1)
    assert u.derivation() == -u          # N(u) = -u
    assert APoly.one(r).derivation().is_zero()
    assert APoly.u_power(r, 5).derivation().is_zero()  # N(u^p) = -p u^p = 0


def test_leibniz_and_frobenius_multiplicative_random():
    r = get_aring(GlobalParams(5, 2, 1, 2))
    rng = random.Random(5)
    for _ in range(1000):
        a = rand_apoly(rng, r)
        b = rand_apoly(rng, r)
        ab = a * b
        assert ab.derivation() == a.derivation() * b + a * b.derivation()
        assert ab.frobenius() == a.frobenius() * b.frobenius()


def test_divide_by_u_power():
    r = ring511()
    x = APoly.u_power(r, 3)
    assert x.try_divide_by_u_power(2) == APoly.u_power(r, 1)
    with pytest.raises(DivisibilityError):
        (APoly.one(r) + x).try_divide_by_u_power(1)
    assert APoly.zero(r).try_divide_by_u_power(4).is_zero()


def test_smith_examples():
    r = ring511()
    # already diagonal up to sort
    m = AMatrix.from_entries(r, [[APoly.u_power(r, 1), APoly.zero(r)],
                                 [APoly.zero(r), APoly.one(r)]])
    _, exps, _ = smith_normal_form(m)
    assert exps == [0, 1]
    # columns (1,u),(u,0),(0,u)
    m = AMatrix.from_entries(r, [
        [APoly.one(r), APoly.u_power(r, 1), APoly.zero(r)],
        [APoly.u_power(r, 1), APoly.zero(r), APoly.u_power(r, 1)]])
    _, exps, _ = smith_normal_form(m)
    assert exps == [0, 1]
    # zero matrix
    _, exps, _ = smith_normal_form(AMatrix.zeros(r, 2, 2))
    assert exps == [r.ep, r.ep]


def test_smith_transform_identity_and_invariance():
    r = get_aring(GlobalParams(5, 2, 1, 2))
    rng = random.Random(6)
    for _ in range(10):
        m = rand_matrix(rng, r, 3, 4)
        U, exps, V = smith_normal_form(m)
        assert U.is_invertible() and V.is_invertible()
        assert exps == sorted(exps)
        D = U @ m @ V
        for i in range(3):
            for j in range(4):
                ent = D.entry(i, j)
                if i == j and exps[i] < r.ep:
                    assert ent == APoly.u_power(r, exps[i])
                else:
                    assert ent.is_zero()
        P = rand_invertible(rng, r, 3)
        Q = rand_invertible(rng, r, 4)
        assert smith_exponents(P @ m @ Q) == exps


def test_matrix_inverse_roundtrip():
    r = ring521()
    rng = random.Random(7)
    for d in (1, 2, 3):
        m = rand_invertible(rng, r, d)
        assert m @ m.inverse() == AMatrix.identity(r, d)
        assert m.inverse() @ m == AMatrix.identity(r, d)


def test_non_unit_inverse_raises():
    r = ring511()
    with pytest.raises(DomainError):
        APoly.u_power(r, 1).inverse()
