"""Exact arithmetic in F_{p^f}.

Elements are coefficient vectors of length f over Z/p, little-endian with
respect to a fixed monic irreducible modulus.  For each (p, f) the modulus is
the monic irreducible polynomial of degree f whose coefficient vector, read
as a base-p integer sum(c_i * p^i), is smallest.  This makes every field, and
hence every serialized object, reproducible without external tables.
"""

from __future__ import annotations

import functools
import random
from typing import Iterator

import numpy as np

from .errors import DomainError

# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (little-endian int lists, no trailing zeros)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _trim(a)
    return a


def _pmulmod(a, b, m, p):
    return _pmod(_pmul(a, b, p), m, p)


def _ppowmod(a, n, m, p):
    result = [1]
    base = _pmod(a, m, p)
    while n:
        if n & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        n >>= 1
    return result


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a = _pmod(a, b, p)
        a, b = b, a
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _is_irreducible(poly, p):
    """Rabin test: poly monic of degree f over F_p."""
    f = len(poly) - 1
    if f == 1:
        return True
    x = [0, 1]
    # x^(p^f) == x mod poly
    xq = x
    for _ in range(f):
        xq = _ppowmod(xq, p, poly, p)
    if _trim([(c - d) % p for c, d in
              zip(xq + [0] * len(x), x + [0] * len(xq))]) != []:
        return False
    for q in _prime_divisors(f):
        xq = x
        for _ in range(f // q):
            xq = _ppowmod(xq, p, poly, p)
        diff = _trim([(c - d) % p for c, d in
                      zip(xq + [0] * len(x), x + [0] * len(xq))])
        if _pgcd(diff, poly, p) != [1]:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def smallest_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Monic irreducible of degree f over F_p minimizing the base-p value of
    its lower coefficient vector.  Returned as a full little-endian tuple of
    length f + 1 (leading coefficient 1)."""
    if f == 1:
        return (0, 1)
    for k in range(p ** f):
        tail = []
        v = k
        for _ in range(f):
            tail.append(v % p)
            v //= p
        poly = tail + [1]
        if _is_irreducible(poly, p):
            return tuple(poly)
    raise DomainError(f"no irreducible polynomial of degree {f} over F_{p}")  # pragma: no cover


# ---------------------------------------------------------------------------


class FieldElem:
    """Element of F_{p^f}: immutable coefficient tuple over Z/p."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "Field", coeffs):
        self.field = field
        self.coeffs = tuple(int(c) % field.p for c in coeffs)
        if len(self.coeffs) != field.f:
            raise DomainError("coefficient vector has wrong length")

    def __add__(self, other):
        other = self.field.coerce(other)
        return FieldElem(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        other = self.field.coerce(other)
        return FieldElem(self.field, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return FieldElem(self.field, [-a for a in self.coeffs])

    def __mul__(self, other):
        other = self.field.coerce(other)
        return self.field._mul(self, other)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise DomainError("inversion of zero in the coefficient field")
        # F_{p^f}^* has order p^f - 1
        return self ** (self.field.p ** self.field.f - 2)

    def frobenius_power(self, t: int) -> "FieldElem":
        """x -> x^(p^t); the identity when t is a multiple of f."""
        t %= self.field.f
        mat = self.field.frobenius_matrix_power(t)
        vec = (mat @ np.array(self.coeffs, dtype=np.int64)) % self.field.p
        return FieldElem(self.field, vec.tolist())

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def value(self) -> int:
        """Serialization order key: the base-p value of the coefficient vector."""
        v = 0
        for c in reversed(self.coeffs):
            v = v * self.field.p + c
        return v

    def __eq__(self, other):
        return (isinstance(other, FieldElem) and self.field is other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __repr__(self):
        return f"FieldElem{self.coeffs}"


class Field:
    """The finite field F_{p^f} with its deterministic modulus."""

    def __init__(self, p: int, f: int):
        self.p = p
        self.f = f
        self.modulus = smallest_irreducible(p, f)
        self.order = p ** f
        # reduction of x^k for k = 0..2f-2 as rows of a (2f-1, f) matrix
        rows = []
        cur = [1] + [0] * (f - 1) if f > 1 else [1]
        for k in range(2 * f - 1):
            rows.append(list(cur))
            cur = _pmod([0] + cur, list(self.modulus), p)
            cur = cur + [0] * (f - len(cur))
        self.reduction = np.array(rows, dtype=np.int64)
        self._frob_cache: dict[int, np.ndarray] = {}
        self._generator: FieldElem | None = None
        self._dlog_baby: dict | None = None

    # -- constructors ------------------------------------------------------

    def elem(self, coeffs) -> FieldElem:
        return FieldElem(self, coeffs)

    def zero(self) -> FieldElem:
        return FieldElem(self, [0] * self.f)

    def one(self) -> FieldElem:
        return FieldElem(self, [1] + [0] * (self.f - 1))

    def from_int(self, n: int) -> FieldElem:
        """Image of the integer n under Z -> F_p -> F_{p^f}."""
        return FieldElem(self, [n % self.p] + [0] * (self.f - 1))

    def from_value(self, v: int) -> FieldElem:
        """Inverse of FieldElem.value()."""
        coeffs = []
        for _ in range(self.f):
            coeffs.append(v % self.p)
            v //= self.p
        return FieldElem(self, coeffs)

    def coerce(self, x) -> FieldElem:
        if isinstance(x, FieldElem):
            if x.field is not self:
                if x.field.p == self.p and x.field.f == self.f:
                    return FieldElem(self, x.coeffs)
                raise DomainError("element of a different field")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        raise DomainError(f"cannot coerce {x!r} into F_{self.p}^{self.f}")

    def elements(self) -> Iterator[FieldElem]:
        """All field elements in serialization order."""
        for v in range(self.order):
            yield self.from_value(v)

    # -- arithmetic --------------------------------------------------------

    def _mul(self, a: FieldElem, b: FieldElem) -> FieldElem:
        conv = np.convolve(np.array(a.coeffs, dtype=np.int64),
                           np.array(b.coeffs, dtype=np.int64))
        conv = np.concatenate([conv, np.zeros(2 * self.f - 1 - len(conv), dtype=np.int64)])
        out = (conv @ self.reduction) % self.p
        return FieldElem(self, out.tolist())

    def mult_matrix(self, a: FieldElem) -> np.ndarray:
        """f x f matrix over F_p of multiplication by a, acting on columns."""
        cols = []
        for i in range(self.f):
            conv = np.zeros(2 * self.f - 1, dtype=np.int64)
            conv[i:i + self.f] = np.array(a.coeffs, dtype=np.int64)
            cols.append((conv @ self.reduction) % self.p)
        return np.array(cols, dtype=np.int64).T

    def frobenius_matrix_power(self, t: int) -> np.ndarray:
        """Matrix of x -> x^(p^t) on the F_p-basis 1, x, .., x^(f-1)."""
        t %= self.f
        if t not in self._frob_cache:
            cols = []
            for i in range(self.f):
                basis = [0] * self.f
                basis[i] = 1
                img = _ppowmod(basis, self.p ** t, list(self.modulus), self.p)
                img = img + [0] * (self.f - len(img))
                cols.append(img)
            self._frob_cache[t] = np.array(cols, dtype=np.int64).T
        return self._frob_cache[t]

    def multiplicative_generator(self) -> FieldElem:
        """Smallest generator of F_{p^f}^* in serialization order."""
        if self._generator is not None:
            return self._generator
        n = self.order - 1
        primes = _prime_divisors(n)
        for v in range(1, self.order):
            g = self.from_value(v)
            if any((g ** (n // q)) == self.one() for q in primes):
                continue
            self._generator = g
            return g
        raise DomainError("no generator found")  # pragma: no cover

    def dlog(self, x: FieldElem) -> int:
        """Discrete log base the canonical generator (baby-step giant-step)."""
        if x.is_zero():
            raise DomainError("zero has no discrete logarithm")
        g = self.multiplicative_generator()
        n = self.order - 1
        m = int(n ** 0.5) + 1
        if self._dlog_baby is None:
            table = {}
            acc = self.one()
            for j in range(m):
                table[acc.coeffs] = j
                acc = acc * g
            self._dlog_baby = (m, table, acc)  # acc = g^m
        m, table, gm = self._dlog_baby
        giant = gm.inverse()
        cur = x
        for i in range(m + 1):
            j = table.get(cur.coeffs)
            if j is not None:
                return (i * m + j) % n
            cur = cur * giant
        raise DomainError("element is not in the multiplicative group")  # pragma: no cover

    def __repr__(self):
        return f"Field(p={self.p}, f={self.f})"


@functools.lru_cache(maxsize=None)
def get_field(p: int, f: int) -> Field:
    return Field(p, f)


# ---------------------------------------------------------------------------
# embeddings F_{p^f} -> F_{p^F} for f | F


def _find_root(poly: list[FieldElem], big: Field, rng: random.Random) -> FieldElem:
    """A root in `big` of a monic polynomial known to split there.

    Cantor-Zassenhaus with a PRNG seeded deterministically by the caller, so
    the chosen root (hence the embedding) is reproducible.
    """
    deg = len(poly) - 1
    if deg == 1:
        return -poly[0]
    # random delta; g = gcd((x + delta)^((q-1)/2) - 1, poly) splits poly
    q = big.order

    def mulmod(a, b):
        out = [big.zero()] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return _redmod(out)

    def _redmod(a):
        a = list(a)
        while len(a) > deg:
            lead = a.pop()
            if lead.is_zero():
                continue
            for i in range(deg):
                a[len(a) - deg + i] = a[len(a) - deg + i] - lead * poly[i]
        return a

    def gcd(a, b):
        def trim(x):
            while x and x[-1].is_zero():
                x.pop()
            return x
        a, b = trim(list(a)), trim(list(b))
        while b:
            inv = b[-1].inverse()
            bb = [c * inv for c in b]
            rem = list(a)
            while len(rem) >= len(bb):
                lead = rem.pop()
                if lead.is_zero():
                    continue
                for i in range(len(bb) - 1):
                    rem[len(rem) - len(bb) + 1 + i] = (
                        rem[len(rem) - len(bb) + 1 + i] - lead * bb[i])
                rem = trim(rem)
            a, b = b, rem
        return a

    while True:
        delta = big.from_value(rng.randrange(q))
        base = [delta, big.one()]
        # (x + delta)^((q-1)/2) mod poly
        acc = [big.one()]
        n = (q - 1) // 2
        b = base
        while n:
            if n & 1:
                acc = mulmod(acc, b)
            b = mulmod(b, b)
            n >>= 1
        acc = list(acc)
        acc[0] = acc[0] - big.one()
        g = gcd(poly, acc)
        if 0 < len(g) - 1 < deg:
            part = g if len(g) - 1 <= deg - (len(g) - 1) else _quot(poly, g, big)
            inv = part[-1].inverse()
            part = [c * inv for c in part]
            return _find_root(part, big, rng)


def _quot(a, b, big):
    """Exact quotient of monic-divisible polynomials over `big`."""
    rem = list(a)
    quo = [big.zero()] * (len(a) - len(b) + 1)
    inv = b[-1].inverse()
    while len(rem) >= len(b):
        lead = rem[-1] * inv
        quo[len(rem) - len(b)] = lead
        for i in range(len(b)):
            rem[len(rem) - len(b) + i] = rem[len(rem) - len(b) + i] - lead * b[i]
        while rem and rem[-1].is_zero():
            rem.pop()
        if not rem:
            break
    return quo


@functools.lru_cache(maxsize=None)
def embedding_matrix(p: int, f: int, F: int) -> np.ndarray:
    """F_p-matrix (F x f) of the canonical embedding F_{p^f} -> F_{p^F}.

    Sends the generator class of x to the deterministically chosen root of
    the degree-f modulus inside F_{p^F}.  Requires f | F.
    """
    if F % f != 0:
        raise DomainError(f"no embedding F_(p^{f}) -> F_(p^{F})")
    small = get_field(p, f)
    big = get_field(p, F)
    if f == 1:
        cols = [big.one()]
    else:
        rng = random.Random((p, f, F).__hash__() & 0x7FFFFFFF)
        poly = [big.from_int(c) for c in small.modulus]
        root = _find_root(poly[:-1] + [big.one()], big, rng)
        cols = [big.one()]
        for _ in range(f - 1):
            cols.append(cols[-1] * root)
    return np.array([c.coeffs for c in cols], dtype=np.int64).T
