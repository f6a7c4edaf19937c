"""Membership of a form in a homogeneous ideal, one graded piece at a time.

``graded_membership(g, gens, d)`` decides whether ``g = sum h_j gens_j``
with each ``h_j`` homogeneous of degree ``d - deg(gens_j)``.  This is a
finite linear system over the monomials of degree ``d``; no Groebner bases.

The default method first eliminates linear generators (each one solves for
a variable), which shrinks the system to the quotient ring, then lifts the
answer back by exact division.  ``method="dense"`` solves the full system
directly and serves as an independent check.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..linalg import solve
from .poly import Inhomogeneous, Polynomial


class DegreeError(ValueError):
    pass


@dataclass(frozen=True)
class Membership:
    member: bool
    certificate: tuple[Polynomial, ...] | None = None

    def __bool__(self):
        return self.member

    def combine(self, generators: Sequence[Polynomial]) -> Polynomial:
        """``sum h_j * gen_j`` for the stored certificate."""
        if self.certificate is None:
            raise ValueError("no certificate")
        total = Polynomial.zero(generators[0].ambient, generators[0].field)
        for h, gen in zip(self.certificate, generators):
            total = total + h * gen
        return total


def _degree(p: Polynomial, what: str):
    d = p.quasi_degree()
    if isinstance(d, Inhomogeneous):
        raise DegreeError(f"{what} is {d}")
    return d


def _validate(g, generators, total_degree):
    if not generators:
        raise DegreeError("no generators given")
    amb, fld = generators[0].ambient, generators[0].field
    for p in [g, *generators]:
        if p.ambient != amb or p.field != fld:
            raise DegreeError("all polynomials must share ambient and field")
    dg = _degree(g, "target")
    if dg is not None and dg != total_degree:
        raise DegreeError(f"target has degree {dg}, expected {total_degree}")
    degs = []
    for i, gen in enumerate(generators):
        d = _degree(gen, f"generator {i}")
        degs.append(d)
    return amb, fld, degs


def _dense(g, generators, degs, total_degree, variables=None):
    """Solve over the monomial basis; multipliers only use ``variables``."""
    amb, fld = g.ambient, g.field
    allowed = set(range(amb.nvars)) if variables is None else set(variables)

    def ok(e):
        return all(a == 0 or i in allowed for i, a in enumerate(e))

    columns = []  # (generator index, multiplier monomial, product)
    for j, (gen, d) in enumerate(zip(generators, degs)):
        if d is None or d > total_degree:
            continue
        for m in amb.monomials(total_degree - d):
            if ok(m):
                prod = Polynomial.monomial(amb, m, field=fld) * gen
                if not prod.is_zero():
                    columns.append((j, m, prod))
    rows = sorted({e for _, _, p in columns for e in p.terms} | set(g.terms), reverse=True)
    zero = [Polynomial.zero(amb, fld) for _ in generators]
    if not columns:
        return Membership(True, tuple(zero)) if g.is_zero() else Membership(False)
    row_index = {e: i for i, e in enumerate(rows)}
    matrix = [[fld.zero] * len(columns) for _ in rows]
    for k, (_, _, p) in enumerate(columns):
        for e, c in p.items():
            matrix[row_index[e]][k] = c
    rhs = [g.coefficient(e) for e in rows]
    sol = solve(matrix, rhs, fld)
    if sol is None:
        return Membership(False)
    x, _ = sol
    cert = {j: {} for j in range(len(generators))}
    for k, (j, m, _) in enumerate(columns):
        if not fld.is_zero(x[k]):
            cert[j][m] = x[k]
    return Membership(True, tuple(Polynomial(amb, fld, cert[j]) for j in range(len(generators))))


def _is_linear(p: Polynomial) -> bool:
    return not p.is_zero() and all(sum(e) == 1 for e in p.terms)


def _divide_linear(P: Polynomial, ell: Polynomial, var: int):
    """``P = Q * ell + R`` with ``R`` free of ``var``; ``ell`` is linear with a ``var`` term."""
    amb, fld = P.ambient, P.field
    unit = tuple(int(i == var) for i in range(amb.nvars))
    c_inv = fld.inv(ell.coefficient(unit))
    Q = Polynomial.zero(amb, fld)
    R = P
    while True:
        lead = {}
        for e, c in R.items():
            if e[var]:
                d = list(e)
                d[var] -= 1
                lead[tuple(d)] = fld.mul(c, c_inv)
        if not lead:
            return Q, R
        D = Polynomial(amb, fld, lead)
        Q = Q + D
        R = R - D * ell


def _eliminate(generators: Sequence[Polynomial]):
    """Triangularise the linear generators.

    Returns ``(pivots, combos)``: ``pivots`` lists ``(var, reduced_form)``, and
    ``combos[k]`` expresses the k-th reduced form as constant multiples of the
    original generators.
    """
    fld = generators[0].field
    pivots, combos = [], []
    for j, gen in enumerate(generators):
        if not _is_linear(gen):
            continue
        form = gen
        combo = {j: fld.one}
        for (v, red), cmb in zip(pivots, combos):
            unit = tuple(int(i == v) for i in range(gen.ambient.nvars))
            c = form.coefficient(unit)
            if not fld.is_zero(c):
                f = fld.mul(c, fld.inv(red.coefficient(unit)))
                form = form - red.scale(f)
                for k, val in cmb.items():
                    combo[k] = fld.sub(combo.get(k, fld.zero), fld.mul(f, val))
        if form.is_zero():
            continue
        var = min(i for e in form.terms for i, a in enumerate(e) if a)
        pivots.append((var, form))
        combos.append(combo)
    return pivots, combos


def _reduce(P: Polynomial, pivots):
    quotients = []
    for var, form in pivots:
        Q, P = _divide_linear(P, form, var)
        quotients.append(Q)
    return quotients, P


def _by_elimination(g, generators, degs, total_degree):
    amb, fld = g.ambient, g.field
    pivots, combos = _eliminate(generators)
    if not pivots:
        return _dense(g, generators, degs, total_degree)
    eliminated = {v for v, _ in pivots}
    remaining = [i for i in range(amb.nvars) if i not in eliminated]
    others = [j for j, gen in enumerate(generators) if not _is_linear(gen)]
    _, g_bar = _reduce(g, pivots)
    reduced = [_reduce(generators[j], pivots)[1] for j in others]
    cert = [Polynomial.zero(amb, fld) for _ in generators]
    if others:
        sub = _dense(g_bar, reduced, [degs[j] for j in others], total_degree, remaining)
        if not sub:
            return Membership(False)
        for j, h in zip(others, sub.certificate):
            cert[j] = h
    elif not g_bar.is_zero():
        return Membership(False)
    rest = g
    for j in others:
        rest = rest - cert[j] * generators[j]
    quotients, remainder = _reduce(rest, pivots)
    if not remainder.is_zero():
        raise AssertionError("elimination lift left a nonzero remainder")
    for Q, combo in zip(quotients, combos):
        for k, c in combo.items():
            cert[k] = cert[k] + Q.scale(c)
    return Membership(True, tuple(cert))


def graded_membership(g: Polynomial, generators: Sequence[Polynomial], total_degree: int,
                      method: str = "auto") -> Membership:
    """Is ``g`` in the ideal of ``generators`` in degree ``total_degree``?

    Returns a :class:`Membership`, truthy with a certificate ``(h_j)`` such
    that ``sum h_j * generators[j] == g`` exactly.  Raises
    :class:`DegreeError` for inhomogeneous input or a target of the wrong
    degree.
    """
    generators = list(generators)
    _, _, degs = _validate(g, generators, total_degree)
    if method == "dense":
        result = _dense(g, generators, degs, total_degree)
    elif method == "auto":
        result = _by_elimination(g, generators, degs, total_degree)
    else:
        raise ValueError(f"unknown method {method!r}")
    if result and result.combine(generators) != g:
        raise AssertionError("membership certificate does not reproduce the target")
    return result


__all__ = ["DegreeError", "Membership", "graded_membership"]
