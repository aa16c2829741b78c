"""Tame inertia characters of simple objects and the monomial-model solver.

A digit cycle (n_i) of period h has weight cycle m_i = er - n_i and exponents
s_i = m_i p^{h-1} + m_{i+1} p^{h-2} + ... + m_{i+h-1}; the attached character
of the tame inertia quotient has level h and exponent s_1 with respect to the
fundamental characters.  Since 0 <= m_i <= er, the base-p digits of every
exponent satisfy the weight bound automatically -- inertia_weights recomputes
and asserts it anyway.

The cyclic equation system x_i^p = sign * pi^{m_i} * x_{i+1} is solved in an
exact monomial model of the residues of the integral closure: a monomial is a
field coefficient in F_{p^{2h}} times a rational power of the uniformizer
with denominator p^h - 1, and it vanishes once the valuation reaches e.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .decomp import jordan_holder
from .core import BreuilModule
from .errors import DomainError, InvariantViolation
from .gf import Field, FieldElem, get_field
from .params import GlobalParams
from .simples import SimpleDescriptor, classifying_rational

__all__ = [
    "TameCharacter", "MonomialSolution", "Monomial", "weight_vector",
    "tame_character", "inertia_weights", "rational_character_identity",
    "solve_system_S", "galois_orbit", "a_ss_exponent_test",
]


@functools.lru_cache(maxsize=65536)
def _gen_power(p: int, degree: int, log: int) -> FieldElem:
    fld = get_field(p, degree)
    return fld.multiplicative_generator() ** log


# ---------------------------------------------------------------------------
# weights and characters


def weight_vector(desc: SimpleDescriptor) -> tuple[list[int], list[int]]:
    """(m_1..m_h, s_1..s_h) with m_i = er - n_i and s_i the base-p packing of
    the rotated weight cycle.  Satisfies p s_i = s_{i+1} + m_i (p^h - 1)."""
    params = desc.params
    p, er = params.p, params.er
    h = desc.period
    m = [er - n for n in desc.digits]
    s = []
    for i in range(h):
        acc = 0
        for j in range(h):
            acc = acc * p + m[(i + j) % h]
        s.append(acc)
    return m, s


@dataclass(frozen=True)
class TameCharacter:
    """A character of tame inertia: level h, exponent modulo p^h - 1.

    Canonical form: reduce to the smallest level h' | h through which the
    character factors, then take the smallest exponent in the Frobenius
    orbit {p^a s}.  Equality of characters is equality of canonical forms.
    """

    p: int
    level: int
    exponent: int

    def __post_init__(self):
        mod = self.p ** self.level - 1
        object.__setattr__(self, "exponent", self.exponent % mod)

    def canonical(self) -> "TameCharacter":
        p, h, s = self.p, self.level, self.exponent
        if s == 0:
            return TameCharacter(p, 1, 0)
        mod = p ** h - 1
        level = h
        for hp in range(1, h):
            if h % hp:
                continue
            quot = mod // (p ** hp - 1)
            if s % quot == 0:
                level, s, mod = hp, s // quot, p ** hp - 1
                break
        best = min((s * pow(p, a, mod)) % mod for a in range(level))
        return TameCharacter(p, level, best)

    def __eq__(self, other):
        if not isinstance(other, TameCharacter):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return (a.p, a.level, a.exponent) == (b.p, b.level, b.exponent)

    def __hash__(self):
        c = self.canonical()
        return hash((c.p, c.level, c.exponent))

    def weight_digits(self) -> list[int]:
        """Base-p digits of the exponent, most significant first, padded to
        the level: the inertia weights of the character."""
        digits = []
        v = self.exponent
        for _ in range(self.level):
            digits.append(v % self.p)
            v //= self.p
        return digits[::-1]


def tame_character(desc: SimpleDescriptor) -> TameCharacter:
    """The character attached to the simple class; rotation-invariant."""
    _, s = weight_vector(desc)
    return TameCharacter(desc.params.p, desc.period, s[0])


def inertia_weights(M: BreuilModule):
    """(level, exponent) per composition factor, plus the weight lists.

    Asserts the bound 0 <= m_i <= er on every base-p digit; the ranks add up
    to the rank of M.
    """
    report = jordan_holder(M)
    out = []
    er = M.params.er
    for desc in report.factors:
        ch = tame_character(desc)
        digits = ch.weight_digits()
        if any(not 0 <= w <= er for w in digits):
            raise InvariantViolation(
                f"inertia weight outside [0, {er}]: {digits}")
        out.append((ch.level, ch.exponent, digits))
    if sum(level for level, _, _ in out) != M.rank:
        raise InvariantViolation("levels do not add up to the rank")
    return out


def rational_character_identity(desc: SimpleDescriptor) -> bool:
    """Exact check of s_i = (p^h - 1)(er/(p-1) - t_i) against the classifying
    rationals of the rotations."""
    params = desc.params
    p, h = params.p, desc.period
    _, s = weight_vector(desc)
    mod = Fraction(p ** h - 1)
    base = Fraction(params.er, p - 1)
    for i in range(h):
        t_i = classifying_rational(desc.rotate(i)).as_fraction()
        if Fraction(s[i]) != mod * (base - t_i):
            return False
    return True


# ---------------------------------------------------------------------------
# the monomial model


@dataclass(frozen=True)
class Monomial:
    """coeff * pi^val with coeff in F_{p^{2h}} and val rational >= 0 with
    denominator p^h - 1; zero once val >= e (the valuation of p)."""

    field: Field
    coeff: FieldElem
    val: Fraction
    e: int

    def normalized(self) -> "Monomial":
        if self.coeff.is_zero() or self.val >= self.e:
            return Monomial(self.field, self.field.zero(), Fraction(0), self.e)
        return self

    def is_zero(self) -> bool:
        n = self.normalized()
        return n.coeff.is_zero()

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.field, self.coeff * other.coeff,
                        self.val + other.val, self.e).normalized()

    def power(self, k: int) -> "Monomial":
        return Monomial(self.field, self.coeff ** k, self.val * k,
                        self.e).normalized()

    def __sub__(self, other: "Monomial") -> "Monomial":
        a, b = self.normalized(), other.normalized()
        if a.is_zero():
            return Monomial(self.field, -b.coeff, b.val, self.e).normalized()
        if b.is_zero():
            return a
        if a.val != b.val:
            raise DomainError("difference of monomials of unequal valuation")
        return Monomial(self.field, a.coeff - b.coeff, a.val, self.e).normalized()

    def __eq__(self, other):
        a, b = self.normalized(), other.normalized()
        return a.coeff == b.coeff and (a.is_zero() or a.val == b.val)


@dataclass(frozen=True)
class MonomialSolution:
    """One solution of the cyclic system: x_i = sign^i eps^{p^i} eta^{s_i}
    where eta = pi^{1/(p^h-1)} and eps is a (p^h - 1)-th root of sign^h,
    stored as a power of the deterministic generator of F_{p^{2h}}^*."""

    params: GlobalParams
    h: int
    sign: int
    eps_log: int | None   # None encodes the zero solution
    s: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return self.eps_log is None

    def field(self) -> Field:
        return get_field(self.params.p, 2 * self.h)

    def eps(self) -> FieldElem:
        return _gen_power(self.params.p, 2 * self.h, self.eps_log)

    def component(self, i: int) -> Monomial:
        """x_i for i in Z/h (1-indexed like the digit cycle)."""
        fld = self.field()
        e = self.params.e
        if self.is_zero:
            return Monomial(fld, fld.zero(), Fraction(0), e)
        idx = (i - 1) % self.h
        coeff = self.eps().frobenius_power(idx + 1)
        if self.sign == -1 and (idx + 1) % 2:
            coeff = -coeff
        val = Fraction(self.s[idx], self.params.p ** self.h - 1)
        return Monomial(fld, coeff, val, e)

    def verify(self) -> bool:
        """Check x_i^p = sign * pi^{m_i} * x_{i+1} in the monomial model."""
        fld = self.field()
        e = self.params.e
        p = self.params.p
        comps = [self.component(i) for i in range(1, self.h + 1)]
        sgn = fld.from_int(self.sign)
        for i in range(1, self.h + 1):
            lhs = comps[i - 1].power(p)
            # p s_i = s_{i+1} + m_i (p^h - 1)
            m_i = (p * self.s[(i - 1) % self.h] - self.s[i % self.h]) \
                // (p ** self.h - 1)
            pi_m = Monomial(fld, sgn, Fraction(m_i), e)
            rhs = pi_m * comps[i % self.h]
            if not lhs == rhs:
                return False
        return True

    def subtract(self, other: "MonomialSolution") -> "MonomialSolution":
        """Difference of two solutions of the homogeneous system; again a
        solution (the zero solution when they coincide)."""
        if self.params != other.params or self.s != other.s or self.sign != other.sign:
            raise DomainError("solutions of different systems")
        if other.is_zero:
            return self
        if self.is_zero:
            fld = self.field()
            q2 = fld.order - 1
            half = q2 // 2
            return MonomialSolution(self.params, self.h, self.sign,
                                    (other.eps_log + half) % q2, self.s)
        fld = self.field()
        g = fld.multiplicative_generator()
        diff = g ** self.eps_log - g ** other.eps_log
        if diff.is_zero():
            return MonomialSolution(self.params, self.h, self.sign, None, self.s)
        return MonomialSolution(self.params, self.h, self.sign, fld.dlog(diff), self.s)


def solve_system_S(desc: SimpleDescriptor, sign: int | None = None) -> list[MonomialSolution]:
    """All p^h solutions of x_i^p = sign pi^{m_i} x_{i+1} in the monomial
    model: the zero solution and one solution per (p^h - 1)-th root of
    sign^h in F_{p^{2h}}.  Default sign is (-1)^r."""
    params = desc.params
    p, h = params.p, desc.period
    if sign is None:
        sign = (-1) ** params.r
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    _, s = weight_vector(desc)
    fld = get_field(p, 2 * h)
    q2 = fld.order - 1
    target = 0 if (sign == 1 or h % 2 == 0) else q2 // 2  # dlog of sign^h
    # solve (p^h - 1) j = target (mod q2) with q2 = (p^h - 1)(p^h + 1):
    # target is a multiple of p^h - 1, and the solutions are
    # target/(p^h - 1) + k (p^h + 1) for k = 0 .. p^h - 2.
    step = p ** h - 1
    if target % step:
        raise InvariantViolation("root equation unexpectedly unsolvable")
    j0 = target // step
    cofactor = q2 // step
    sols = [MonomialSolution(params, h, sign, None, tuple(s))]
    for k in range(step):
        sols.append(MonomialSolution(params, h, sign,
                                     (j0 + k * cofactor) % q2, tuple(s)))
    for sol in sols:
        if not sol.verify():
            raise InvariantViolation("monomial solution failed verification")
    return sols


def galois_orbit(sol: MonomialSolution, zeta_power: int) -> MonomialSolution:
    """Action of the tame generator scaling eta by zeta^{zeta_power}: sends
    x_i to zeta^{zeta_power s_i} x_i, realized by multiplying eps."""
    if sol.is_zero:
        return sol
    params = sol.params
    p, h = params.p, sol.h
    fld = sol.field()
    q2 = fld.order - 1
    step = (q2 // (p ** h - 1))  # dlog of the primitive (p^h-1)-th root zeta
    pinv = pow(p, -1, p ** h - 1)
    shift = (zeta_power * sol.s[0] * pinv) % (p ** h - 1)
    return MonomialSolution(params, h, sol.sign,
                            (sol.eps_log + shift * step) % q2, sol.s)


def orbit_character(sol: MonomialSolution) -> TameCharacter:
    """Character through which the tame generator acts on the solution set."""
    params = sol.params
    p, h = params.p, sol.h
    pinv = pow(p, -1, p ** h - 1)
    return TameCharacter(p, h, (sol.s[0] * pinv) % (p ** h - 1))


# ---------------------------------------------------------------------------
# digit test for the semisimple coefficient module


def a_ss_exponent_test(t: Fraction, params: GlobalParams) -> bool:
    """True when every base-p digit of the purely periodic expansion of the
    fractional part of t lies in [0, er]."""
    t = Fraction(t)
    if t.denominator % params.p == 0:
        raise DomainError("denominator must be prime to p")
    frac = t - (t.numerator // t.denominator)
    if frac == 0:
        return True
    p, er = params.p, params.er
    # period = order of p modulo the reduced denominator
    den = frac.denominator
    h = 1
    acc = p % den
    while acc != 1:
        acc = (acc * p) % den
        h += 1
    a = frac.numerator * ((p ** h - 1) // den)
    digits = []
    for _ in range(h):
        digits.append(a % p)
        a //= p
    return all(0 <= d <= er for d in digits)
