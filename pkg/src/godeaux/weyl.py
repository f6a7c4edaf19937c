"""W(E8) acting on the mod-2 reduction of the odd unimodular lattice Z^{1,8}.

``B = Z H + Z E1 + ... + Z E8`` with ``H^2 = 1``, ``E_i^2 = -1`` and
canonical class ``K = -3H + E1 + ... + E8``.  The orthogonal complement of
``K`` is a negative definite E8, generated by the simple roots below; its
Weyl group fixes ``K`` and acts on ``B/2B``.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .lattice import GramLattice, Vector

LABELS = ("H",) + tuple(f"E{i}" for i in range(1, 9))


def hyperbolic_lattice() -> GramLattice:
    diag = [1] + [-1] * 8
    return GramLattice([[diag[i] if i == j else 0 for j in range(9)] for i in range(9)], LABELS)


B = hyperbolic_lattice()
H: Vector = B.basis_vector("H")
K: Vector = (-3,) + (1,) * 8


def simple_roots() -> list[Vector]:
    """``E1-E2, ..., E7-E8, H-E1-E2-E3``."""
    roots = []
    for i in range(1, 8):
        v = [0] * 9
        v[i], v[i + 1] = 1, -1
        roots.append(tuple(v))
    roots.append((1, -1, -1, -1, 0, 0, 0, 0, 0))
    return roots


def reflect(v: Sequence[int], r: Sequence[int]) -> Vector:
    """Reflection in a (-2)-vector: ``v + (v.r) r``."""
    if B.norm(r) != -2:
        raise ValueError(f"not a root: {tuple(r)} has square {B.norm(r)}")
    c = B.pair(v, r)
    return tuple(a + c * b for a, b in zip(v, r))


@dataclass(frozen=True, order=True)
class F2Class:
    """A class in ``B/2B`` with the residue of ``v^2`` mod 4 (independent of the lift)."""

    coords: tuple[int, ...]
    qmod4: int

    @classmethod
    def of(cls, v: Sequence[int]) -> "F2Class":
        lift = tuple(int(x) % 2 for x in v)
        return cls(lift, B.norm(lift) % 4)

    def label(self) -> str:
        named = {F2Class.of(H).coords: "[H]", F2Class.of(K).coords: "[K]", (0,) * 9: "[0]"}
        if self.coords in named:
            return named[self.coords]
        return "[" + " + ".join(lab for lab, c in zip(LABELS, self.coords) if c) + "]"


def all_classes() -> list[F2Class]:
    out = []
    for n in range(512):
        out.append(F2Class.of(tuple((n >> (8 - i)) & 1 for i in range(9))))
    return out


def reflect_mod2(c: F2Class, r: Sequence[int]) -> F2Class:
    """Action of the reflection in ``r`` on ``B/2B``; ``(v.r) mod 2`` is lift-independent."""
    return F2Class.of(reflect(c.coords, r))


def orbits_mod2(keep: Callable[[F2Class], bool] | None = None,
                generators: Sequence[Sequence[int]] | None = None,
                shuffle: random.Random | None = None) -> list[frozenset[F2Class]]:
    """Orbits of the group generated by the reflections on the kept classes.

    The kept set must be a union of orbits (true for any predicate of
    ``qmod4``).  ``shuffle`` randomises the generator order and the BFS
    seeds, which must not change the answer.  Orbits are returned sorted by
    their smallest member.
    """
    gens = [tuple(r) for r in (generators or simple_roots())]
    classes = [c for c in all_classes() if keep is None or keep(c)]
    if shuffle is not None:
        shuffle.shuffle(gens)
        shuffle.shuffle(classes)
    seen: set[F2Class] = set()
    orbits = []
    for start in classes:
        if start in seen:
            continue
        orbit = {start}
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for r in gens:
                d = reflect_mod2(c, r)
                if d not in orbit:
                    orbit.add(d)
                    queue.append(d)
        seen |= orbit
        orbits.append(frozenset(orbit))
    return sorted(orbits, key=min)


def qmod4_is(residue: int) -> Callable[[F2Class], bool]:
    return lambda c: c.qmod4 == residue % 4


@dataclass(frozen=True)
class OrbitRow:
    representative: str
    size: int
    qmod4: int


def orbit_table(orbits: Iterable[frozenset[F2Class]]) -> list[OrbitRow]:
    """One row per orbit; named classes ([0], [H], [K]) are preferred as representatives."""
    named = {F2Class.of(v) for v in ((0,) * 9, H, K)}
    rows = []
    for orb in orbits:
        rep = min(orb & named) if orb & named else min(orb)
        rows.append(OrbitRow(rep.label(), len(orb), rep.qmod4))
    return rows


__all__ = [
    "B", "F2Class", "H", "K", "LABELS", "OrbitRow", "all_classes", "hyperbolic_lattice",
    "orbit_table", "orbits_mod2", "qmod4_is", "reflect", "reflect_mod2", "simple_roots",
]
