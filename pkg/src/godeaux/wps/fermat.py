"""Lines on the Fermat quintic and their first-order deformations.

Every line on ``x1^5 + x2^5 + x3^5 + x4^5 = 0`` has the form
``x_a = w x_b, x_c = e x_d`` with ``{a,b} | {c,d}`` a splitting of the four
coordinates and ``w^5 = e^5 = -1``; there are 3 * 5 * 5 = 75 of them.
A line ``X = Y = 0`` lifts to ``F + tG`` over ``k[t]/t^2`` iff ``G`` lies in
``(X, Y, A, B)`` where ``F = A X + B Y``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from ..fields import CyclotomicField, Field, FieldError
from .membership import Membership, graded_membership
from .poly import Ambient, Polynomial

VARIABLES = ("x1", "x2", "x3", "x4")
PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def quintic_ambient() -> Ambient:
    """P^3 with the free Z/5 action ``x_i -> zeta^i x_i``."""
    return Ambient(VARIABLES, (1, 1, 1, 1), 5, (1, 2, 3, 4))


def fermat(amb: Ambient, fld: Field) -> Polynomial:
    return Polynomial(amb, fld, {tuple(5 * int(i == j) for i in range(4)): fld.one for j in range(4)})


def fifth_roots_of_minus_one(fld: Field) -> list:
    minus_one = fld.neg(fld.one)
    roots = [r for r in fld.roots_of_unity(10) if fld.pow(r, 5) == minus_one]
    if len(roots) < 5:
        raise FieldError(f"{fld} lacks the fifth roots of -1; need primitive 10th roots of unity "
                         "(q ≡ 1 (mod 10) for a finite field)")
    return roots


@dataclass(frozen=True)
class Line:
    pairing: tuple[tuple[int, int], tuple[int, int]]
    omega: object
    eta: object
    X: Polynomial
    Y: Polynomial

    def describe(self) -> str:
        (a, b), (c, d) = self.pairing
        f = self.X.field
        return (f"{VARIABLES[a]} = {f.format(self.omega)}*{VARIABLES[b]}, "
                f"{VARIABLES[c]} = {f.format(self.eta)}*{VARIABLES[d]}")


def _on_quintic(line: Line, F: Polynomial) -> bool:
    amb, fld = F.ambient, F.field
    (a, b), (c, d) = line.pairing
    sub = {a: Polynomial.variable(amb, b, fld).scale(line.omega),
           c: Polynomial.variable(amb, d, fld).scale(line.eta)}
    return F.substitute(sub).is_zero()


def lines_on_fermat_quintic(fld: Field | None = None) -> list[Line]:
    """All lines of the Fermat quintic, each verified by substitution."""
    fld = fld or CyclotomicField(5)
    amb = quintic_ambient()
    F = fermat(amb, fld)
    roots = fifth_roots_of_minus_one(fld)
    lines = []
    for pairing in PAIRINGS:
        (a, b), (c, d) = pairing
        xa, xb, xc, xd = (Polynomial.variable(amb, i, fld) for i in (a, b, c, d))
        for w in roots:
            for e in roots:
                line = Line(pairing, w, e, xa - xb.scale(w), xc - xd.scale(e))
                if not _on_quintic(line, F):
                    raise AssertionError(f"{line.describe()} is not on the quintic")
                lines.append(line)
    return lines


def quartic_cofactors(line: Line) -> tuple[Polynomial, Polynomial]:
    """``(A, B)`` with ``F = A X + B Y``, read off a membership certificate."""
    F = fermat(line.X.ambient, line.X.field)
    res = graded_membership(F, [line.X, line.Y], 5)
    if not res:
        raise AssertionError(f"{line.describe()}: F is not in (X, Y)")
    return res.certificate


def deforms(line: Line, G: Polynomial) -> Membership:
    """Does the line survive to first order in the direction ``G``?"""
    A, B = quartic_cofactors(line)
    return graded_membership(G, [line.X, line.Y, A, B], 5)


def invariant_quintic_monomials(amb: Ambient | None = None) -> list[tuple[int, ...]]:
    amb = amb or quintic_ambient()
    return [e for e in amb.monomials(5) if amb.character(e) == 0]


def random_invariant_quintic(fld: Field, rng: random.Random, bound: int = 9) -> Polynomial:
    """Random Z/5-invariant quintic with integer coefficients in ``[-bound, bound]``."""
    amb = quintic_ambient()
    terms = {e: fld.from_int(rng.randint(-bound, bound)) for e in invariant_quintic_monomials(amb)}
    return Polynomial(amb, fld, terms)


__all__ = [
    "Line", "PAIRINGS", "deforms", "fermat", "fifth_roots_of_minus_one",
    "invariant_quintic_monomials", "lines_on_fermat_quintic", "quartic_cofactors",
    "quintic_ambient", "random_invariant_quintic",
]
