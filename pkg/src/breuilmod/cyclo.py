"""Exact congruence checks in cyclotomic integers.

Computations run in Z[X]/(1 + X + ... + X^{p-1}) with coefficients reduced
modulo a chosen bound; Python integers keep intermediate products exact
(p^{p+1} overflows machine words already at p = 7).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .errors import DomainError
from .params import is_prime

__all__ = ["CyclotomicElem", "verify_t_congruence", "verify_b_sum"]


@dataclass(frozen=True)
class CyclotomicElem:
    """Element of Z[X]/Phi_p(X), coefficients length p-1, reduced mod modulus."""

    p: int
    modulus: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.p - 1:
            raise DomainError("coefficient vector must have length p - 1")
        object.__setattr__(
            self, "coeffs", tuple(c % self.modulus for c in self.coeffs))

    @classmethod
    def from_list(cls, p: int, modulus: int, coeffs) -> "CyclotomicElem":
        """Reduce an arbitrary-degree integer polynomial by
        X^{p-1} = -(1 + X + ... + X^{p-2})."""
        work = list(coeffs)
        while len(work) >= p:
            lead = work.pop()
            if lead:
                base = len(work) - (p - 1)
                for i in range(p - 1):
                    work[base + i] -= lead
        work.extend([0] * (p - 1 - len(work)))
        return cls(p, modulus, tuple(work))

    def __mul__(self, other: "CyclotomicElem") -> "CyclotomicElem":
        out = [0] * (2 * (self.p - 1) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return CyclotomicElem.from_list(self.p, self.modulus, out)

    def __pow__(self, n: int) -> "CyclotomicElem":
        result = CyclotomicElem.from_list(self.p, self.modulus, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_constant(self, value: int) -> bool:
        if self.coeffs[0] != value % self.modulus:
            return False
        return all(c == 0 for c in self.coeffs[1:])


def verify_t_congruence(p: int) -> bool:
    """(zeta - 1)^{p(p-1)} = -p^p modulo p^{p+1} in Z[zeta_p]."""
    if p == 2 or not is_prime(p):
        raise DomainError("p must be an odd prime")
    modulus = p ** (p + 1)
    zeta_minus_one = CyclotomicElem.from_list(p, modulus, [-1, 1])
    lhs = zeta_minus_one ** (p * (p - 1))
    return lhs.is_constant(-(p ** p))


def verify_b_sum(p: int) -> bool:
    """With a_i = (-1)^i C(p-1, i) - 1: every a_i is a multiple of p and the
    integers b_i = a_i / p add up to -1."""
    if p == 2 or not is_prime(p):
        raise DomainError("p must be an odd prime")
    total = 0
    for i in range(p - 1):
        a_i = (-1) ** i * comb(p - 1, i) - 1
        if a_i % p:
            raise DomainError(f"a_{i} = {a_i} is not divisible by {p}")
        total += a_i // p
    return total == -1
