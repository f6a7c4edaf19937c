"""Exact Gaussian elimination over any :mod:`godeaux.fields` field."""
from __future__ import annotations

from .fields import QQ, Field


def rref(rows: list[list], field: Field = QQ) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not field.is_zero(m[i][c])), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: list[list], field: Field = QQ) -> int:
    return len(rref(rows, field)[1])


def nullspace(rows: list[list], ncols: int, field: Field = QQ) -> list[list]:
    """Basis of {x : rows @ x = 0}."""
    red, pivots = rref(rows, field) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for row, pc in zip(red, pivots):
            x[pc] = field.neg(row[f])
        basis.append(x)
    return basis


def solve(matrix: list[list], rhs: list, field: Field = QQ):
    """All solutions of ``matrix @ x = rhs``.

    Returns ``(particular, kernel_basis)`` or ``None`` when inconsistent.
    """
    ncols = len(matrix[0]) if matrix else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    x = [field.zero] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x, nullspace(matrix, ncols, field)


def det(matrix: list[list], field: Field = QQ):
    """Determinant by elimination."""
    m = [list(r) for r in matrix]
    n = len(m)
    result = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not field.is_zero(m[i][c])), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = field.neg(result)
        result = field.mul(result, m[c][c])
        inv = field.inv(m[c][c])
        for i in range(c + 1, n):
            if not field.is_zero(m[i][c]):
                f = field.mul(m[i][c], inv)
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[c])]
    return result


def matmul(a: list[list], b: list[list]) -> list[list]:
    """Plain integer/rational matrix product."""
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]
