"""Simple objects: cyclic modules attached to digit cycles.

A digit cycle (n_1, .., n_h) with 0 <= n_i <= er and no smaller period gives
the rank-h object with Fil = sum u^{n_i} A e_i, Frobenius sending u^{n_i} e_i
to e_{i+1} cyclically, and zero monodromy.  Rotating the cycle gives an
isomorphic object; the lexicographically minimal rotation is the canonical
class representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .aring import AMatrix, get_aring
from .core import BreuilModule
from .errors import DomainError
from .params import GlobalParams

__all__ = [
    "SimpleDescriptor", "ClassifyingRational", "make_simple",
    "is_shift_equivalent", "enumerate_simples", "classifying_rational",
    "endomorphism_field_degree", "lyndon_count", "exact_period",
    "min_rotation",
]


def exact_period(digits: tuple[int, ...]) -> int:
    """Smallest cyclic period of the digit sequence."""
    h = len(digits)
    for t in range(1, h + 1):
        if h % t == 0 and all(digits[i] == digits[i % t] for i in range(h)):
            return t
    return h


def min_rotation(digits: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically smallest rotation (Booth-style doubling scan)."""
    h = len(digits)
    best = 0
    doubled = digits + digits
    for i in range(1, h):
        if doubled[i:i + h] < doubled[best:best + h]:
            best = i
    return doubled[best:best + h]


@dataclass(frozen=True)
class SimpleDescriptor:
    """A digit cycle of exact period h classifying a simple object."""

    params: GlobalParams
    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if len(self.digits) < 1:
            raise DomainError("descriptor needs at least one digit")
        er = self.params.er
        for d in self.digits:
            if not 0 <= d <= er:
                raise DomainError(f"digit {d} outside [0, {er}]")
        if exact_period(self.digits) != len(self.digits):
            raise DomainError(
                f"digit cycle {self.digits} has a smaller period; not a valid class")

    @property
    def period(self) -> int:
        return len(self.digits)

    def canonical(self) -> "SimpleDescriptor":
        return SimpleDescriptor(self.params, min_rotation(self.digits))

    def rotate(self, k: int) -> "SimpleDescriptor":
        h = self.period
        k %= h
        return SimpleDescriptor(self.params, self.digits[k:] + self.digits[:k])


@dataclass(frozen=True)
class ClassifyingRational:
    """The rational in Z_(p) with purely periodic base-p expansion given by
    the digit cycle; kept over the denominator p^h - 1 for canonicity."""

    numerator: int
    denominator: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


def make_simple(desc: SimpleDescriptor) -> BreuilModule:
    """The rank-h object of the descriptor: cyclic Frobenius, zero monodromy."""
    params = desc.params
    ring = get_aring(params)
    h = desc.period
    G = np.zeros((h, h, ring.ep, ring.f), dtype=np.int64)
    for j in range(h):
        G[(j + 1) % h, j] = ring.one_coeffs()
    N = np.zeros_like(G)
    return BreuilModule(params, desc.digits, AMatrix(ring, G), AMatrix(ring, N))


def is_shift_equivalent(a: SimpleDescriptor, b: SimpleDescriptor) -> bool:
    if a.params != b.params:
        raise DomainError("descriptors live over different params")
    if a.period != b.period:
        return False
    return min_rotation(a.digits) == min_rotation(b.digits)


def _moebius(n: int) -> int:
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def lyndon_count(alphabet: int, h: int) -> int:
    """Number of aperiodic necklaces of length h over `alphabet` letters."""
    total = 0
    for d in range(1, h + 1):
        if h % d == 0:
            total += _moebius(d) * alphabet ** (h // d)
    return total // h


def _lyndon_words(alphabet: int, max_len: int):
    """Duval's generator: all Lyndon words of length <= max_len over
    {0..alphabet-1} in lexicographic order."""
    w = [0]
    yield tuple(w)
    while True:
        m = len(w)
        w = [w[i % m] for i in range(max_len)]
        while w and w[-1] == alphabet - 1:
            w.pop()
        if not w:
            return
        w[-1] += 1
        yield tuple(w)


def enumerate_simples(params: GlobalParams, h: int) -> list[SimpleDescriptor]:
    """Canonical representatives (Lyndon words over {0..er}) of the classes
    with exact period h, in lexicographic order."""
    if h < 1:
        raise DomainError("period must be >= 1")
    return [SimpleDescriptor(params, w)
            for w in _lyndon_words(params.er + 1, h) if len(w) == h]


def classifying_rational(desc: SimpleDescriptor) -> ClassifyingRational:
    """0.(n_1 n_2 ... n_h) repeating, in base p: numerator over p^h - 1."""
    p = desc.params.p
    h = desc.period
    a = 0
    for d in desc.digits:
        a = a * p + d
    return ClassifyingRational(a, p ** h - 1)


def endomorphism_field_degree(desc: SimpleDescriptor) -> int:
    """Degree over F_p of the endomorphism field of the simple object over an
    algebraically closed residue field; equals the period.  Over F_{p^f} the
    visible endomorphism algebra has F_p-dimension gcd(h, f)."""
    return desc.period
