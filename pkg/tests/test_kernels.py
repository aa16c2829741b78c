"""Backend parity and correctness of the raw kernels."""

import numpy as np
import pytest

from breuilmod import _kernels_py
from breuilmod.linalg import nullspace_mod, rank_mod, solve_affine_mod

try:
    from breuilmod import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

BACKENDS = [_kernels_py] + ([_kernels_c] if _kernels_c else [])


@pytest.mark.parametrize("kernels", BACKENDS)
def test_rref_properties(kernels):
    rng = np.random.default_rng(0)
    for _ in range(30):
        p = int(rng.choice([3, 5, 7]))
        m = rng.integers(0, p, size=(int(rng.integers(1, 15)),
                                     int(rng.integers(1, 15))))
        red, pivots = kernels.rref_mod(m, p)
        for row, pc in enumerate(pivots):
            assert red[row, pc] == 1
            assert not np.any(np.delete(red[:, pc], row))
        # row space unchanged: every original row reduces to zero against red
        for orig in m:
            v = orig.copy() % p
            for row, pc in zip(red, pivots):
                v = (v - v[pc] * row) % p
            assert not np.any(v)


@pytest.mark.parametrize("kernels", BACKENDS)
def test_conv_matches_numpy(kernels):
    rng = np.random.default_rng(1)
    for _ in range(30):
        p = 7
        a = rng.integers(0, p, size=int(rng.integers(1, 40)))
        b = rng.integers(0, p, size=int(rng.integers(1, 40)))
        assert np.array_equal(kernels.poly_conv(a, b, p), np.convolve(a, b) % p)


@pytest.mark.skipif(_kernels_c is None, reason="compiled kernels not built")
def test_backends_agree():
    rng = np.random.default_rng(2)
    for _ in range(40):
        p = int(rng.choice([3, 5, 7, 11]))
        m = rng.integers(0, p, size=(int(rng.integers(1, 25)),
                                     int(rng.integers(1, 25))))
        r1, p1 = _kernels_py.rref_mod(m, p)
        r2, p2 = _kernels_c.rref_mod(m, p)
        assert np.array_equal(r1, r2) and p1 == p2
        a = rng.integers(0, p, size=(2, 3, int(rng.integers(1, 20))))
        b = rng.integers(0, p, size=(3, 2, int(rng.integers(1, 20))))
        assert np.array_equal(_kernels_py.poly_matmul(a, b, p),
                              _kernels_c.poly_matmul(a, b, p))


def test_nullspace_and_solve():
    rng = np.random.default_rng(3)
    for _ in range(30):
        p = 5
        m = rng.integers(0, p, size=(6, 9))
        null = nullspace_mod(m, p)
        assert not np.any((m @ null) % p)
        assert rank_mod(m, p) + null.shape[1] == 9
        x = rng.integers(0, p, size=9)
        rhs = (m @ x) % p
        part, basis = solve_affine_mod(m, rhs, p)
        assert np.array_equal((m @ part) % p, rhs)
