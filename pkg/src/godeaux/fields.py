"""Exact coefficient fields.

Every computation declares its coefficient domain up front.  Four kinds are
supported:

* ``QQ`` -- the rationals, elements are :class:`fractions.Fraction`;
* :class:`PrimeField` -- ``F_p``, elements are ints in ``range(p)``;
* :class:`ExtensionField` -- ``F_p[z]/(f)``, elements are ints in
  ``range(p**k)`` encoding the coefficient vector in base ``p``;
* :class:`CyclotomicField` -- ``Q(zeta_n)``, elements are tuples of
  Fractions in the power basis ``1, zeta, ..., zeta**(phi(n)-1)``.

The finite fields also expose vectorised operations on numpy int64 arrays,
which is what the point scanner runs on.
"""
from __future__ import annotations

from fractions import Fraction
import numpy as np


class FieldError(ValueError):
    """Raised when a field cannot represent a requested element."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class Field:
    """Common scalar interface.  Subclasses override the arithmetic."""

    characteristic = 0
    name = "field"

    def from_int(self, n: int):
        raise NotImplementedError

    def from_fraction(self, q: Fraction):
        num = self.from_int(q.numerator)
        if q.denominator == 1:
            return num
        den = self.from_int(q.denominator)
        if self.is_zero(den):
            raise FieldError(f"denominator {q.denominator} vanishes in {self.name}")
        return self.mul(num, self.inv(den))

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def is_zero(self, a) -> bool:
        return a == self.zero

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def roots_of_unity(self, m: int) -> list:
        """All x in the field with x**m == 1, in a deterministic order."""
        raise NotImplementedError

    def primitive_root_of_unity(self, m: int):
        """A primitive m-th root of unity, or FieldError naming the condition."""
        if m == 1:
            return self.one
        for x in self.roots_of_unity(m):
            if all(self.pow(x, m // r) != self.one for r in _prime_factors(m)):
                return x
        raise FieldError(self._root_condition(m))

    def _root_condition(self, m: int) -> str:
        return f"{self.name} contains no primitive {m}-th root of unity"

    def format(self, a) -> str:
        return str(a)

    def __repr__(self) -> str:
        return self.name


class RationalField(Field):
    name = "QQ"

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def add(self, a, b):
        return Fraction(a + b)

    def neg(self, a):
        return Fraction(-a)

    def mul(self, a, b):
        return Fraction(a * b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / a

    def roots_of_unity(self, m):
        return [Fraction(1)] if m % 2 else [Fraction(1), Fraction(-1)]

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


class FiniteField(Field):
    """Shared behaviour of the finite fields; ``order`` is the field size."""

    order: int

    def elements(self) -> range:
        return range(self.order)

    def roots_of_unity(self, m):
        return [x for x in range(1, self.order) if self.pow(x, m) == 1]

    def _root_condition(self, m):
        q = self.order
        return (f"{self.name} has no primitive {m}-th root of unity; "
                f"need q ≡ 1 (mod {m}), but q = {q}")

    def primitive_root_of_unity(self, m):
        if (self.order - 1) % m:
            raise FieldError(self._root_condition(m))
        return super().primitive_root_of_unity(m)

    def is_square(self, a) -> bool:
        if a == 0:
            return True
        return self.pow(a, (self.order - 1) // 2) == 1 if self.order % 2 else True

    def sqrt(self, a):
        """Both square roots (sorted), or an empty list."""
        return sorted(x for x in range(self.order) if self.mul(x, x) == a)


class PrimeField(FiniteField):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = self.order = self.characteristic = p
        self.name = f"GF({p})"

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, e):
        return pow(a, e, self.p)

    def format(self, a):
        return str(a)

    # vectorised (numpy int64) arithmetic
    def vadd(self, a, b):
        return (a + b) % self.p

    def vmul(self, a, b):
        return (a * b) % self.p

    def vscale(self, c: int, a):
        return (a * c) % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


class ExtensionField(FiniteField):
    """``F_p[z]/(modulus)`` with log/antilog tables.

    ``modulus`` lists coefficients from the constant term up and must be
    monic and irreducible; irreducibility is confirmed by finding a
    generator of the multiplicative group while building the tables.
    """

    def __init__(self, p: int, modulus: list[int]):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        modulus = [c % p for c in modulus]
        if len(modulus) < 3 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree >= 2")
        self.p = self.characteristic = p
        self.k = len(modulus) - 1
        self.modulus = tuple(modulus)
        self.order = p ** self.k
        if self.order > 2048:
            raise FieldError(f"extension of order {self.order} is too large for table arithmetic")
        self.name = f"GF({p}^{self.k})[{_format_modulus(modulus)}]"
        self._build_tables()

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds) -> int:
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def _slow_mul(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                for i in range(k + 1):
                    prod[deg - k + i] = (prod[deg - k + i] - c * self.modulus[i]) % p
        return self._undigits(prod[:k])

    def _build_tables(self):
        q = self.order
        for g in range(2, q):
            exp = [1]
            seen = {1}
            x = 1
            for _ in range(q - 2):
                x = self._slow_mul(x, g)
                # a reducible modulus has idempotents whose powers cycle away from 1
                if x in seen or x == 0:
                    break
                seen.add(x)
                exp.append(x)
            if len(exp) == q - 1:
                break
        else:
            raise FieldError(f"modulus {_format_modulus(self.modulus)} is reducible over GF({self.p})")
        self.generator = g
        self._exp = np.array(exp + exp, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        log[np.array(exp)] = np.arange(q - 1)
        self._log = log
        digits = np.array([self._digits(a) for a in range(q)], dtype=np.int64)
        powers = self.p ** np.arange(self.k, dtype=np.int64)
        summed = (digits[:, None, :] + digits[None, :, :]) % self.p
        self._add = (summed * powers).sum(axis=2)
        self._neg = ((-digits) % self.p * powers).sum(axis=1)

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return int(self._add[a, b])

    def neg(self, a):
        return int(self._neg[a])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)])

    def pow(self, a, e):
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("0 ** non-positive")
            return 0
        return int(self._exp[(int(self._log[a]) * e) % (self.order - 1)])

    def format(self, a):
        ds = self._digits(a)
        parts = []
        for i, d in enumerate(ds):
            if d:
                mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
                if not mono:
                    parts.append(str(d))
                else:
                    parts.append(mono if d == 1 else f"{d}*{mono}")
        return "+".join(reversed(parts)) or "0"

    def vadd(self, a, b):
        return self._add[a, b]

    def vmul(self, a, b):
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vscale(self, c, a):
        if c == 0:
            return np.zeros_like(a)
        out = self._exp[self._log[a] + self._log[c]]
        return np.where(a == 0, 0, out)

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and (other.p, other.modulus) == (self.p, self.modulus)

    def __hash__(self):
        return hash(("GFext", self.p, self.modulus))


def _format_modulus(coeffs) -> str:
    terms = []
    for i, c in reversed(list(enumerate(coeffs))):
        if c:
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            terms.append(f"{c}*{mono}" if mono and c != 1 else (mono or str(c)))
    return "+".join(terms)


def parse_modulus(text: str, p: int) -> list[int]:
    """Parse ``"z^2+3*z+1"``-style text into a coefficient list (constant first)."""
    from .wps.poly import Ambient
    from .wps.parser import parse

    amb = Ambient(["z"], [1])
    poly = parse(text, amb, QQ)
    deg = max(e[0] for e in poly.terms)
    coeffs = [0] * (deg + 1)
    for (e,), c in poly.terms.items():
        if c.denominator != 1:
            raise FieldError("modulus coefficients must be integers")
        coeffs[e] = c.numerator % p
    return coeffs


def _cyclotomic_poly(n: int) -> list[int]:
    """Integer coefficients of Phi_n, constant term first."""
    # x^n - 1 = prod_{d | n} Phi_d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, _cyclotomic_poly(d))
    return num


def _poly_divexact(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        out[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    assert not any(a), "inexact polynomial division"
    return out


class CyclotomicField(Field):
    """``Q(zeta_n)`` in the power basis, reduced modulo the cyclotomic polynomial."""

    def __init__(self, n: int):
        if n < 1:
            raise FieldError("cyclotomic order must be positive")
        self.n = n
        self.phi = _cyclotomic_poly(n)
        self.degree = len(self.phi) - 1
        self.name = f"Q(zeta{n})"

    def from_int(self, k):
        return (Fraction(k),) + (Fraction(0),) * (self.degree - 1)

    def from_fraction(self, q):
        return (Fraction(q),) + (Fraction(0),) * (self.degree - 1)

    @property
    def zeta(self):
        if self.degree == 1:
            # Q(zeta_1) = Q(zeta_2) = Q
            return self.from_int(1 if self.n == 1 else -1)
        return (Fraction(0), Fraction(1)) + (Fraction(0),) * (self.degree - 2)

    def zeta_power(self, j: int):
        return self.pow(self.zeta, j % self.n) if self.n > 1 else self.one

    def is_zero(self, a):
        return not any(a)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def _reduce(self, coeffs: list[Fraction]) -> tuple:
        d = self.degree
        for deg in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[deg]
            if c:
                for i in range(d + 1):
                    coeffs[deg - d + i] -= c * self.phi[i]
        return tuple(coeffs[:d])

    def mul(self, a, b):
        d = self.degree
        out = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return self._reduce(out)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        from .linalg import solve

        d = self.degree
        # columns of the multiplication-by-a matrix are a*zeta^j
        cols = []
        basis = [tuple(Fraction(int(i == j)) for i in range(d)) for j in range(d)]
        for e in basis:
            cols.append(self.mul(a, e))
        matrix = [[cols[j][i] for j in range(d)] for i in range(d)]
        sol = solve(matrix, list(self.one), QQ)
        assert sol is not None
        return tuple(sol[0])

    def roots_of_unity(self, m):
        # the roots of unity in Q(zeta_n) are +-zeta^j
        cands = []
        for j in range(max(self.n, 1)):
            z = self.zeta_power(j)
            for s in (z, self.neg(z)):
                if s not in cands and self.pow(s, m) == self.one:
                    cands.append(s)
        return cands

    def format(self, a):
        parts = []
        for i, c in enumerate(a):
            if c:
                mono = "" if i == 0 else ("zeta" if i == 1 else f"zeta^{i}")
                if not mono:
                    parts.append(str(c))
                elif c == 1:
                    parts.append(mono)
                else:
                    parts.append(f"{c}*{mono}")
        return "(" + " + ".join(parts) + ")" if len(parts) > 1 else (parts[0] if parts else "0")

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.n == self.n

    def __hash__(self):
        return hash(("cyclo", self.n))


def make_field(prime: int | None = None, extension: str | None = None,
               cyclotomic: int | None = None) -> Field:
    """Build a field from CLI-style options."""
    if cyclotomic is not None:
        return CyclotomicField(cyclotomic)
    if prime is None:
        return QQ
    if extension:
        return ExtensionField(prime, parse_modulus(extension, prime))
    return PrimeField(prime)


__all__ = [
    "QQ", "Field", "FieldError", "RationalField", "PrimeField", "ExtensionField",
    "CyclotomicField", "FiniteField", "make_field", "parse_modulus",
]
