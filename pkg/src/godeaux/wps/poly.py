"""Sparse polynomials on a weighted, cyclically graded ambient ring."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from ..fields import QQ, Field

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class Ambient:
    """Variables with projective weights and characters of a diagonal ``Z/k`` action.

    ``char_weights[i] = e`` means ``x_i -> zeta**e * x_i``.
    """

    variables: tuple[str, ...]
    weights: tuple[int, ...]
    group_order: int = 1
    char_weights: tuple[int, ...] | None = None

    def __init__(self, variables: Sequence[str], weights: Sequence[int] | None = None,
                 group_order: int = 1, char_weights: Sequence[int] | None = None):
        variables = tuple(variables)
        weights = tuple(weights) if weights is not None else (1,) * len(variables)
        chars = tuple(c % group_order for c in char_weights) if char_weights is not None else (0,) * len(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        if not (len(variables) == len(weights) == len(chars)):
            raise ValueError("variables, weights and characters must have equal length")
        if any(w < 1 for w in weights):
            raise ValueError("weights must be positive")
        if group_order < 1:
            raise ValueError("group order must be >= 1")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "group_order", group_order)
        object.__setattr__(self, "char_weights", chars)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def degree(self, e: Exponent) -> int:
        return sum(a * w for a, w in zip(e, self.weights))

    def character(self, e: Exponent) -> int:
        return sum(a * c for a, c in zip(e, self.char_weights)) % self.group_order

    def monomials(self, degree: int) -> list[Exponent]:
        """All exponent vectors of the given weighted degree, sorted."""
        out: list[Exponent] = []
        n = self.nvars

        def rec(i, left, acc):
            if i == n:
                if left == 0:
                    out.append(tuple(acc))
                return
            w = self.weights[i]
            for a in range(left // w + 1):
                acc.append(a)
                rec(i + 1, left - a * w, acc)
                acc.pop()

        if degree >= 0:
            rec(0, degree, [])
        return sorted(out, reverse=True)

    def format_monomial(self, e: Exponent) -> str:
        parts = []
        for name, a in zip(self.variables, e):
            if a == 1:
                parts.append(name)
            elif a > 1:
                parts.append(f"{name}^{a}")
        return "*".join(parts)


@dataclass(frozen=True)
class Inhomogeneous:
    """Verdict: two terms disagree on a grading."""

    grading: str
    first: str
    second: str
    first_value: int
    second_value: int

    def __bool__(self):
        return False

    def __str__(self):
        label = "quasi-homogeneous" if self.grading == "degree" else "semi-invariant"
        return (f"not {label}: {self.first} has {self.grading} {self.first_value}, "
                f"{self.second} has {self.grading} {self.second_value}")


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to nonzero field elements."""

    __slots__ = ("ambient", "field", "_terms", "_hash")

    def __init__(self, ambient: Ambient, field: Field, terms: Mapping[Exponent, object] | Iterable = ()):
        self.ambient = ambient
        self.field = field
        clean: dict[Exponent, object] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        n = ambient.nvars
        for e, c in items:
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match {n} variables")
            if e in clean:
                c = field.add(clean[e], c)
            if field.is_zero(c):
                clean.pop(e, None)
            else:
                clean[e] = c
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, ambient, field=QQ):
        return cls(ambient, field, {})

    @classmethod
    def constant(cls, ambient, c, field=QQ):
        return cls(ambient, field, {(0,) * ambient.nvars: c})

    @classmethod
    def variable(cls, ambient, name_or_index, field=QQ):
        i = name_or_index if isinstance(name_or_index, int) else ambient.index(name_or_index)
        e = tuple(int(j == i) for j in range(ambient.nvars))
        return cls(ambient, field, {e: field.one})

    @classmethod
    def monomial(cls, ambient, e, c=None, field=QQ):
        return cls(ambient, field, {tuple(e): field.one if c is None else c})

    @property
    def terms(self) -> dict[Exponent, object]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, e) -> object:
        return self._terms.get(tuple(e), self.field.zero)

    # arithmetic
    def _check(self, other: "Polynomial"):
        if other.ambient != self.ambient:
            raise ValueError("polynomials live on different ambients")
        if other.field != self.field:
            raise ValueError(f"coefficient fields differ: {self.field} vs {other.field}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return Polynomial.constant(self.ambient, self.field.from_int(other), self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        f = self.field
        for e, c in other._terms.items():
            out[e] = f.add(out[e], c) if e in out else c
        return Polynomial(self.ambient, f, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return Polynomial(self.ambient, f, {e: f.neg(c) for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        out: dict[Exponent, object] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = f.mul(c1, c2)
                out[e] = f.add(out[e], prod) if e in out else prod
        return Polynomial(self.ambient, f, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        f = self.field
        return Polynomial(self.ambient, f, {e: f.mul(c, v) for e, v in self._terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(self.ambient, self.field.one, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ambient == other.ambient and self.field == other.field and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient, frozenset(self._terms.items())))
        return self._hash

    # structure
    def variables_used(self) -> tuple[int, ...]:
        used = set()
        for e in self._terms:
            used.update(i for i, a in enumerate(e) if a)
        return tuple(sorted(used))

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def max_exponent(self) -> int:
        return max((max(e) for e in self._terms), default=0)

    def derivative(self, var) -> "Polynomial":
        i = var if isinstance(var, int) else self.ambient.index(var)
        f = self.field
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = f.mul(f.from_int(e[i]), c)
        return Polynomial(self.ambient, f, out)

    def gradient(self) -> list["Polynomial"]:
        return [self.derivative(i) for i in range(self.ambient.nvars)]

    def evaluate(self, point: Sequence) -> object:
        """Value at a point given as field elements, one per variable."""
        f = self.field
        total = f.zero
        cache: dict[tuple[int, int], object] = {}
        for e, c in self._terms.items():
            term = c
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    if key not in cache:
                        cache[key] = f.pow(point[i], a)
                    term = f.mul(term, cache[key])
            total = f.add(total, term)
        return total

    def substitute(self, values: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Replace variables (by index) with polynomials on the same ambient."""
        amb, f = self.ambient, self.field
        result = Polynomial.zero(amb, f)
        powers: dict[tuple[int, int], Polynomial] = {}
        for e, c in self._terms.items():
            keep = tuple(0 if i in values else a for i, a in enumerate(e))
            term = Polynomial(amb, f, {keep: c})
            for i, a in enumerate(e):
                if a and i in values:
                    if (i, a) not in powers:
                        powers[(i, a)] = values[i] ** a
                    term = term * powers[(i, a)]
            result = result + term
        return result

    def restrict_zero(self, indices: Iterable[int]) -> "Polynomial":
        """Set the given variables to zero (drop every term that involves them)."""
        idx = set(indices)
        return Polynomial(self.ambient, self.field,
                          {e: c for e, c in self._terms.items() if not any(e[i] for i in idx)})

    def map_coefficients(self, field: Field, fn=None) -> "Polynomial":
        """Move to another field, e.g. from QQ into GF(p).  ``fn`` defaults to ``field.from_fraction``."""
        fn = fn or field.from_fraction
        return Polynomial(self.ambient, field, {e: fn(c) for e, c in self._terms.items()})

    def quasi_degree(self) -> int | Inhomogeneous | None:
        """Common weighted degree, an :class:`Inhomogeneous` verdict, or None for zero."""
        return self._common(self.ambient.degree, "degree")

    def character_weight(self) -> int | Inhomogeneous | None:
        return self._common(self.ambient.character, "character")

    def _common(self, fn, label):
        first = None
        for e in self.sorted_exponents():
            v = fn(e)
            if first is None:
                first = (e, v)
            elif v != first[1]:
                fmt = self.ambient.format_monomial
                return Inhomogeneous(label, fmt(first[0]) or "1", fmt(e) or "1", first[1], v)
        return None if first is None else first[1]

    def sorted_exponents(self) -> list[Exponent]:
        return sorted(self._terms, key=lambda e: (self.ambient.degree(e), e), reverse=True)

    def __str__(self):
        if not self._terms:
            return "0"
        f, amb = self.field, self.ambient
        pieces = []
        for e in self.sorted_exponents():
            c = self._terms[e]
            mono = amb.format_monomial(e)
            neg = False
            if f is QQ or f == QQ:
                neg = c < 0
                c = -c if neg else c
                text = str(c)
                one = c == 1
            else:
                text = f.format(c)
                one = c == f.one
            if mono:
                if one:
                    body = mono
                elif f == QQ or text.isdigit():
                    body = f"{text}*{mono}"
                else:
                    body = f"({text})*{mono}"
            else:
                body = text if (f == QQ or text.isdigit() or len(pieces) == 0) else f"({text})"
            pieces.append((neg, body))
        out = ("-" if pieces[0][0] else "") + pieces[0][1]
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self):
        return f"Polynomial({self})"


def monomials_of_total_degree(nvars: int, degree: int) -> list[Exponent]:
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


__all__ = ["Ambient", "Exponent", "Inhomogeneous", "Polynomial", "monomials_of_total_degree"]
