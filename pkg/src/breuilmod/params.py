"""Global arithmetic context: the prime p, ramification e, weight r, field degree f."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class GlobalParams:
    """Arithmetic context for all objects.

    Enforces the standing hypothesis e*r < p - 1.  The Eisenstein polynomial
    is fixed to u^e - p, which pins the commutation constant c_pi = -1.
    """

    p: int
    e: int
    r: int
    f: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ParameterError(f"p = {self.p} is not prime")
        if self.e < 1:
            raise ParameterError("e must be >= 1")
        if self.r < 0:
            raise ParameterError("r must be >= 0")
        if self.f < 1:
            raise ParameterError("f must be >= 1")
        if self.e * self.r >= self.p - 1:
            raise ParameterError(
                f"er < p - 1 required, got e*r = {self.e * self.r}, p = {self.p}")

    @property
    def ep(self) -> int:
        """Nilpotency degree of u: the base ring is F_{p^f}[u]/u^{ep}."""
        return self.e * self.p

    @property
    def er(self) -> int:
        return self.e * self.r

    def with_f(self, f: int) -> "GlobalParams":
        return GlobalParams(self.p, self.e, self.r, f)

    def __repr__(self):
        return f"GlobalParams(p={self.p}, e={self.e}, r={self.r}, f={self.f})"
