"""Integer lattices with an intersection form.

Vectors are plain tuples of ints, expressed in the basis of an ambient
:class:`GramLattice`; a sublattice is any sequence of such vectors.
Everything is exact: Python ints and :class:`~fractions.Fraction`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from pathlib import Path
from typing import Sequence

from .fields import QQ
from .linalg import det as _det
from .linalg import matmul, solve

Vector = tuple[int, ...]


class _Infinite:
    """Index of a sublattice of smaller rank."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "infinite"

    __str__ = __repr__


INFINITE = _Infinite()


class LatticeFormatError(ValueError):
    pass


@dataclass(frozen=True)
class GramLattice:
    gram: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "labels", tuple(self.labels))
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        if len(self.labels) != n:
            raise ValueError(f"{len(self.labels)} labels for rank {n}")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Gram matrix must be symmetric")

    @classmethod
    def standard(cls, n: int, diagonal: Sequence[int] | None = None, prefix: str = "e"):
        diagonal = diagonal or [1] * n
        gram = [[diagonal[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(gram, tuple(f"{prefix}{i + 1}" for i in range(n)))

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, u, v):
        g = self.gram
        return sum(u[i] * g[i][j] * v[j] for i in range(self.rank) if u[i] for j in range(self.rank) if v[j])

    def norm(self, v):
        return self.pair(v, v)

    def basis_vector(self, label: str) -> Vector:
        i = self.labels.index(label)
        return tuple(int(j == i) for j in range(self.rank))

    def vector(self, coeffs: dict[str, int]) -> Vector:
        """``L.vector({"C1": 1, "C11": 1})`` -> coordinates."""
        v = [0] * self.rank
        for label, c in coeffs.items():
            v[self.labels.index(label)] += c
        return tuple(v)

    def gram_of(self, vectors: Sequence[Sequence]) -> list[list]:
        return [[self.pair(u, v) for v in vectors] for u in vectors]

    def det(self) -> int:
        return int(_det([list(r) for r in self.gram], QQ))

    def sublattice(self, labels: Sequence[str]) -> "GramLattice":
        """The lattice spanned by some basis vectors, with the induced form."""
        idx = [self.labels.index(lab) for lab in labels]
        return GramLattice([[self.gram[i][j] for j in idx] for i in idx], tuple(labels))


@dataclass(frozen=True)
class AbelianGroup:
    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        facs = tuple(self.invariant_factors)
        object.__setattr__(self, "invariant_factors", facs)
        if any(d < 2 for d in facs):
            raise ValueError("invariant factors must be >= 2")
        if any(b % a for a, b in zip(facs, facs[1:])):
            raise ValueError("each invariant factor must divide the next")

    @property
    def order(self):
        return INFINITE if self.free_rank else _prod(self.invariant_factors)

    @property
    def is_cyclic(self) -> bool:
        return self.free_rank + len(self.invariant_factors) <= 1

    def __str__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]]):
    """Return ``(D, U, V)`` with ``U @ M @ V == D`` and ``U``, ``V`` unimodular.

    ``D`` is diagonal with nonnegative entries ``d_1 | d_2 | ...``.  The pivot
    is always the nonzero entry of smallest absolute value in the remaining
    block (first in row-major order on ties), so the transforms are
    reproducible.
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    a = A[i][j]
                    if a and (best is None or abs(a) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return A, U, V
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return A, U, V


def invariant_factors(M: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    D, _, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def sublattice_index(L: GramLattice, gens: Sequence[Vector]):
    """``|L / <gens>|``, or :data:`INFINITE` when the span has smaller rank."""
    if not gens:
        return INFINITE if L.rank else 1
    facs = invariant_factors(gens)
    if len(facs) < L.rank:
        return INFINITE
    return _prod(facs)


def quotient_group(L: GramLattice, gens: Sequence[Vector]) -> AbelianGroup:
    if not gens:
        return AbelianGroup((), L.rank)
    facs = invariant_factors(gens)
    return AbelianGroup(tuple(d for d in facs if d > 1), L.rank - len(facs))


def in_row_span(v: Sequence[int], rows: Sequence[Sequence[int]]) -> bool:
    """Integer membership ``v in Z<rows>`` decided from the Smith form."""
    if not rows:
        return not any(v)
    D, _, V = smith_normal_form(rows)
    w = [sum(v[i] * V[i][j] for i in range(len(v))) for j in range(len(v))]
    for j, wj in enumerate(w):
        d = D[j][j] if j < len(D) else 0
        if d == 0:
            if wj:
                return False
        elif wj % d:
            return False
    return True


@dataclass(frozen=True)
class SpanSolution:
    """Affine solution set ``particular + span(kernel)`` over Q."""

    particular: tuple[Fraction, ...]
    kernel: tuple[tuple[Fraction, ...], ...] = ()

    def point(self, *coeffs) -> tuple[Fraction, ...]:
        x = list(self.particular)
        for c, k in zip(coeffs, self.kernel):
            x = [a + Fraction(c) * b for a, b in zip(x, k)]
        return tuple(x)


def solve_in_span(v: Vector, gens: Sequence[Vector], L: GramLattice) -> SpanSolution | None:
    """Rational ``x`` with ``sum x_i g_i`` numerically equal to ``v`` against ``gens``.

    The system is ``Gram(gens) x = (v . g_j)_j``; it is solved through the
    intersection form rather than coordinates.  ``None`` if inconsistent.
    """
    gram = [[Fraction(x) for x in row] for row in L.gram_of(gens)]
    rhs = [Fraction(L.pair(v, g)) for g in gens]
    sol = solve(gram, rhs, QQ)
    if sol is None:
        return None
    part, kern = sol
    return SpanSolution(tuple(part), tuple(tuple(k) for k in kern))


def is_divisible_mod(v: Vector, k: int, L: GramLattice, M: Sequence[Vector] = ()) -> bool:
    """True iff ``v`` lies in ``k L + <M>``."""
    if k < 2:
        raise ValueError("k must be >= 2")
    rows = [[k * int(i == j) for j in range(L.rank)] for i in range(L.rank)]
    rows += [list(m) for m in M]
    return in_row_span(v, rows)


@dataclass(frozen=True)
class Mod2Quotient:
    """``L / (2L + M)`` as an F_2 vector space.

    ``image(v)`` gives coordinates on the free (non-pivot) basis positions.
    """

    rank: int
    echelon: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return self.rank - len(self.pivots)

    @property
    def free_positions(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.rank) if i not in self.pivots)

    def reduce(self, v) -> list[int]:
        w = [int(x) % 2 for x in v]
        for row, p in zip(self.echelon, self.pivots):
            if w[p]:
                w = [(a + b) % 2 for a, b in zip(w, row)]
        return w

    def image(self, v) -> tuple[int, ...]:
        w = self.reduce(v)
        return tuple(w[i] for i in self.free_positions)

    def is_zero(self, v) -> bool:
        return not any(self.image(v))


def _f2_echelon(rows: Sequence[Sequence[int]], n: int):
    m = [[int(x) % 2 for x in r] for r in rows]
    out, pivots = [], []
    for c in range(n):
        piv = next((r for r in m if r[c]), None)
        if piv is None:
            continue
        m = [r for r in m if r is not piv]
        m = [[(a + b) % 2 for a, b in zip(r, piv)] if r[c] else r for r in m]
        out = [[(a + b) % 2 for a, b in zip(r, piv)] if r[c] else r for r in out]
        out.append(piv)
        pivots.append(c)
    return tuple(map(tuple, out)), tuple(pivots)


def mod2_quotient(L: GramLattice, M: Sequence[Vector]) -> Mod2Quotient:
    echelon, pivots = _f2_echelon(M, L.rank) if M else ((), ())
    return Mod2Quotient(L.rank, echelon, pivots)


def integer_row_basis(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """A Z-basis (echelon form) of the row lattice of an integer matrix."""
    m = [list(map(int, r)) for r in rows if any(r)]
    n = len(rows[0]) if rows else 0
    basis = []
    for c in range(n):
        while True:
            live = [r for r in m if r[c]]
            if not live:
                break
            piv = min(live, key=lambda r: abs(r[c]))
            rest = []
            for r in m:
                if r is piv:
                    continue
                if r[c]:
                    q = r[c] // piv[c]
                    r = [a - q * b for a, b in zip(r, piv)]
                if any(r):
                    rest.append(r)
            if all(r[c] == 0 for r in rest):
                if piv[c] < 0:
                    piv = [-a for a in piv]
                basis.append(piv)
                m = rest
                break
            m = rest + [piv]
    return basis


@dataclass(frozen=True)
class Overlattice:
    """A lattice generated by an old basis plus rational vectors.

    ``basis`` holds the new basis vectors in old rational coordinates;
    ``coords(x)`` expresses an old-coordinate vector in the new basis.
    """

    lattice: GramLattice
    basis: tuple[tuple[Fraction, ...], ...]
    _inverse: tuple[tuple[Fraction, ...], ...] = field(repr=False, default=())

    def coords(self, x) -> Vector:
        n = len(self.basis)
        y = [sum(Fraction(x[i]) * self._inverse[i][j] for i in range(n)) for j in range(n)]
        if any(c.denominator != 1 for c in y):
            raise ValueError(f"vector {tuple(x)} is not in the overlattice")
        return tuple(int(c) for c in y)


def overlattice(L: GramLattice, extra: Sequence[Sequence], labels: Sequence[str] | None = None) -> Overlattice:
    """The Z-span of the basis of ``L`` and the rational vectors ``extra``.

    ``L`` must be nondegenerate.  The result carries the induced (integer)
    Gram matrix; a ValueError is raised if the form is not integral there.
    """
    n = L.rank
    extra = [tuple(Fraction(c) for c in v) for v in extra]
    den = lcm(1, *(c.denominator for v in extra for c in v))
    rows = [[den * int(i == j) for j in range(n)] for i in range(n)]
    rows += [[int(c * den) for c in v] for v in extra]
    ibasis = integer_row_basis(rows)
    if len(ibasis) != n:
        raise ValueError("overlattice generators do not have full rank")
    basis = [tuple(Fraction(c, den) for c in row) for row in ibasis]
    gram = []
    for u in basis:
        row = []
        for v in basis:
            val = sum(u[i] * L.gram[i][j] * v[j] for i in range(n) for j in range(n))
            if val.denominator != 1:
                raise ValueError("form is not integral on the overlattice")
            row.append(int(val))
        gram.append(row)
    labels = tuple(labels) if labels else tuple(f"b{i + 1}" for i in range(n))
    # inverse of the basis matrix (rows = basis vectors)
    aug = [list(b) + [Fraction(int(i == j)) for j in range(n)] for i, b in enumerate(basis)]
    from .linalg import rref
    red, _ = rref(aug, QQ)
    inverse = tuple(tuple(r[n:]) for r in red)
    return Overlattice(GramLattice(gram, labels), tuple(basis), inverse)


def parse_gram(text: str, source: str = "<string>") -> GramLattice:
    """Read the plain-text fixture format.

    First non-comment line: rank followed by the labels.  Then one row of
    integers per basis vector.  ``#`` starts a comment.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line.split()))
    if not lines:
        raise LatticeFormatError(f"{source}: empty lattice file")
    lineno, header = lines[0]
    try:
        rank = int(header[0])
    except ValueError:
        raise LatticeFormatError(f"{source}:{lineno}: rank must be an integer, got {header[0]!r}") from None
    labels = header[1:]
    if len(labels) != rank:
        raise LatticeFormatError(f"{source}:{lineno}: expected {rank} labels, got {len(labels)}")
    rows = lines[1:]
    if len(rows) != rank:
        raise LatticeFormatError(f"{source}: expected {rank} matrix rows, got {len(rows)}")
    gram = []
    for lineno, toks in rows:
        if len(toks) != rank:
            raise LatticeFormatError(f"{source}:{lineno}: row has {len(toks)} entries, expected {rank}")
        row = []
        for tok in toks:
            if not tok.lstrip("+-").isdigit():
                raise LatticeFormatError(f"{source}:{lineno}: not an integer: {tok!r}")
            row.append(int(tok))
        gram.append(row)
    try:
        return GramLattice(gram, tuple(labels))
    except ValueError as exc:
        raise LatticeFormatError(f"{source}: {exc}") from None


def load_gram(path) -> GramLattice:
    path = Path(path)
    return parse_gram(path.read_text(encoding="utf-8"), str(path))


def format_gram(L: GramLattice, comment: str = "") -> str:
    out = [f"# {line}" for line in comment.splitlines()] if comment else []
    out.append(" ".join([str(L.rank), *L.labels]))
    width = max(len(str(x)) for row in L.gram for x in row)
    for row in L.gram:
        out.append(" ".join(str(x).rjust(width) for x in row))
    return "\n".join(out) + "\n"


def brute_force_divisible(v: Vector, k: int, M: Sequence[Vector]) -> bool:
    """Reference check of ``v in kZ^n + <M>`` by trying every ``sum c_j m_j``, 0 <= c_j < k."""
    for cs in itertools.product(range(k), repeat=len(M)):
        w = list(v)
        for c, m in zip(cs, M):
            w = [a - c * b for a, b in zip(w, m)]
        if all(x % k == 0 for x in w):
            return True
    return False


__all__ = [
    "INFINITE", "AbelianGroup", "GramLattice", "LatticeFormatError", "Mod2Quotient",
    "Overlattice", "SpanSolution", "brute_force_divisible", "format_gram", "in_row_span",
    "integer_row_basis", "invariant_factors", "is_divisible_mod", "load_gram", "matmul",
    "mod2_quotient", "overlattice", "parse_gram", "quotient_group", "smith_normal_form",
    "solve_in_span", "sublattice_index",
]
