"""Point scanner for weighted projective varieties over finite fields.

The scanner walks the affine cone ``F_q^n`` one variable at a time, in an
order chosen so that each equation is tested as soon as all of its
variables are assigned.  Assignments of the first two variables (in that
order) are the work units handed to threads; results are merged by sorting,
so output does not depend on the thread count.

Points are reported as representatives of points of the weighted projective
space (classes under ``x_i -> lam**w_i x_i`` with ``lam`` in the algebraic
closure): the representative is the lexicographically smallest rational
point of the class.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np

from ..fields import FieldError, FiniteField
from ..linalg import rank as _rank
from .poly import Ambient, Polynomial

MIN_CHARACTERISTIC = 8
_BATCH_POINTS = 1 << 21


class ScanError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class PointRecord:
    coords: tuple[int, ...]
    stabilizer_order: int
    jacobian_rank: int
    transverse: bool | None = field(default=None, compare=False)

    def format(self, fld: FiniteField) -> str:
        return "(" + ", ".join(fld.format(c) for c in self.coords) + ")"

    def as_dict(self, fld: FiniteField) -> dict:
        out = {
            "coords": [fld.format(c) for c in self.coords],
            "stabilizer_order": self.stabilizer_order,
            "jacobian_rank": self.jacobian_rank,
        }
        if self.transverse is not None:
            out["transverse"] = self.transverse
        return out


class _Compiled:
    """A polynomial prepared for vectorised evaluation over a finite field."""

    def __init__(self, poly: Polynomial, fld: FiniteField, power_table: np.ndarray):
        self.fld = fld
        self.pow = power_table
        self.terms = [(int(c), [(i, a) for i, a in enumerate(e) if a]) for e, c in poly.items()]
        self.vars = set(poly.variables_used())

    def __call__(self, cols: dict[int, np.ndarray], size: int) -> np.ndarray:
        fld = self.fld
        total = np.zeros(size, dtype=np.int64)
        for c, factors in self.terms:
            if not factors:
                term = np.full(size, c, dtype=np.int64)
            else:
                i, a = factors[0]
                term = self.pow[cols[i], a]
                for i, a in factors[1:]:
                    term = fld.vmul(term, self.pow[cols[i], a])
                if c != 1:
                    term = fld.vscale(c, term)
            total = fld.vadd(total, term)
        return total


def _power_table(fld: FiniteField, max_exp: int) -> np.ndarray:
    q = fld.order
    table = np.zeros((q, max_exp + 1), dtype=np.int64)
    for x in range(q):
        acc = 1
        table[x, 0] = 1
        for e in range(1, max_exp + 1):
            acc = fld.mul(acc, x)
            table[x, e] = acc
    return table


def _check_field(fld, polys: Sequence[Polynomial], required_roots: int | None,
                 allow_small_characteristic: bool):
    if not isinstance(fld, FiniteField):
        raise ScanError(f"scanning needs a finite field, got {fld}")
    if fld.characteristic < MIN_CHARACTERISTIC and not allow_small_characteristic:
        raise ScanError(f"characteristic {fld.characteristic} is too small; "
                        f"need p > {MIN_CHARACTERISTIC - 1}")
    ambs = {p.ambient for p in polys}
    if len(ambs) > 1:
        raise ScanError("polynomials do not share an ambient")
    for p in polys:
        if p.field != fld:
            raise ScanError(f"polynomial has coefficients in {p.field}, expected {fld}")
    if required_roots:
        try:
            fld.primitive_root_of_unity(required_roots)
        except FieldError as exc:
            raise ScanError(str(exc)) from None


def choose_order(polys: Sequence[Polynomial], free: Sequence[int]) -> list[int]:
    """Greedy variable order that completes equations as early as possible."""
    var_sets = [set(p.variables_used()) for p in polys]
    order: list[int] = []
    assigned: set[int] = set()
    remaining = list(free)
    while remaining:
        def score(v):
            now = assigned | {v}
            complete = sum(1 for s in var_sets if s <= now)
            closeness = sum(1 / (len(s - now) + 1) for s in var_sets if not s <= now)
            return (complete, closeness, -v)
        best = max(remaining, key=score)
        order.append(best)
        assigned.add(best)
        remaining.remove(best)
    return order


def _split_linear(poly: Polynomial, var: int):
    """``poly = c1 * var + c0`` if ``poly`` has degree exactly one in ``var``."""
    if max((e[var] for e in poly.terms), default=0) != 1:
        return None
    c1, c0 = {}, {}
    for e, c in poly.items():
        if e[var]:
            e = e[:var] + (0,) + e[var + 1:]
            c1[e] = c
        else:
            c0[e] = c
    amb, fld = poly.ambient, poly.field
    return Polynomial(amb, fld, c1), Polynomial(amb, fld, c0)


class _Plan:
    """Shared state for one scan: compiled equations and the filter schedule.

    When an equation completes at the step that assigns ``v`` and is linear
    in ``v``, that step solves for ``v`` instead of trying every value.
    """

    def __init__(self, polys, fld, nvars, free, fixed_zero, eliminate=True):
        self.fld = fld
        self.nvars = nvars
        self.order = choose_order(polys, free)
        max_exp = max([p.max_exponent() for p in polys] + [1])
        self.pow = _power_table(fld, max_exp)
        self.inv = np.array([0] + [fld.inv(a) for a in range(1, fld.order)], dtype=np.int64)
        self.minus_one = fld.neg(fld.one)
        restricted = [p.restrict_zero(fixed_zero) for p in polys]
        compiled = [_Compiled(p, fld, self.pow) for p in restricted]
        self.initial = [c for c, p in zip(compiled, restricted) if not p.variables_used()]
        done = {id(c) for c in self.initial}
        # schedule[k]: equations whose variables are all assigned after k+1 steps
        self.schedule: list[list[_Compiled]] = []
        self.solver: list[tuple[_Compiled, _Compiled] | None] = []
        assigned: set[int] = set()
        for v in self.order:
            assigned.add(v)
            now = [(c, p) for c, p in zip(compiled, restricted) if id(c) not in done and c.vars <= assigned]
            done.update(id(c) for c, _ in now)
            solver = None
            for c, p in (now if eliminate else ()):
                split = _split_linear(p, v)
                if split is not None:
                    solver = (_Compiled(split[0], fld, self.pow), _Compiled(split[1], fld, self.pow))
                    now = [(c2, p2) for c2, p2 in now if c2 is not c]
                    break
            self.solver.append(solver)
            self.schedule.append([c for c, _ in now])

    def _filter(self, pts: np.ndarray, level: int) -> np.ndarray:
        for comp in self.schedule[level]:
            if len(pts) == 0:
                break
            cols = {v: pts[:, j] for j, v in enumerate(self.order[: level + 1])}
            pts = pts[comp(cols, len(pts)) == 0]
        return pts

    def _extend(self, pts: np.ndarray) -> np.ndarray:
        q = self.fld.order
        base = np.repeat(pts, q, axis=0)
        new = np.tile(np.arange(q, dtype=np.int64), len(pts))[:, None]
        return np.concatenate([base, new], axis=1)

    def _solve(self, pts: np.ndarray, level: int) -> np.ndarray:
        c1_comp, c0_comp = self.solver[level]
        cols = {v: pts[:, j] for j, v in enumerate(self.order[:level])}
        c1, c0 = c1_comp(cols, len(pts)), c0_comp(cols, len(pts))
        unique = c1 != 0
        value = self.fld.vmul(self.fld.vscale(self.minus_one, c0[unique]), self.inv[c1[unique]])
        solved = np.concatenate([pts[unique], value[:, None]], axis=1)
        free = self._extend(pts[(c1 == 0) & (c0 == 0)])
        return np.concatenate([solved, free], axis=0)

    def _advance(self, pts: np.ndarray, level: int) -> np.ndarray:
        pts = self._solve(pts, level) if self.solver[level] else self._extend(pts)
        return self._filter(pts, level)

    def prefixes(self) -> np.ndarray:
        """Surviving assignments of the outermost two variables."""
        pts = np.zeros((1, 0), dtype=np.int64)
        for comp in self.initial:
            if comp({}, 1)[0] != 0:
                return np.zeros((0, 0), dtype=np.int64)
        for level in range(min(2, len(self.order))):
            pts = self._advance(pts, level)
        return pts

    def complete(self, prefix: np.ndarray) -> np.ndarray:
        """Extend a batch of prefixes to full points; returns rows in ambient order."""
        pts = prefix
        for level in range(prefix.shape[1], len(self.order)):
            if len(pts) == 0:
                return np.zeros((0, self.nvars), dtype=np.int64)
            pts = self._advance(pts, level)
        out = np.zeros((len(pts), self.nvars), dtype=np.int64)
        for j, v in enumerate(self.order):
            out[:, v] = pts[:, j]
        return out


def cone_points(polys: Sequence[Polynomial], fld: FiniteField, *, fixed_zero: Sequence[int] = (),
                threads: int = 1, eliminate: bool = True) -> np.ndarray:
    """All nonzero common zeros on the affine cone, sorted lexicographically.

    Variables listed in ``fixed_zero`` are held at zero.  ``eliminate=False``
    disables solving linear equations, so every value is tried.
    """
    amb = polys[0].ambient
    n = amb.nvars
    free = [i for i in range(n) if i not in set(fixed_zero)]
    if not free:
        return np.zeros((0, n), dtype=np.int64)
    plan = _Plan(polys, fld, n, free, fixed_zero, eliminate)
    prefixes = plan.prefixes()
    if len(prefixes) == 0:
        return np.zeros((0, n), dtype=np.int64)
    per_prefix = fld.order ** max(len(free) - prefixes.shape[1], 0)
    step = max(1, _BATCH_POINTS // max(per_prefix, 1))
    batches = [prefixes[i:i + step] for i in range(0, len(prefixes), step)]
    if threads > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(plan.complete, batches))
    else:
        parts = [plan.complete(b) for b in batches]
    pts = np.concatenate(parts, axis=0) if parts else np.zeros((0, n), dtype=np.int64)
    pts = pts[np.any(pts != 0, axis=1)]
    return _sort_rows(pts)


def _sort_rows(pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return pts
    idx = np.lexsort(pts.T[::-1])
    return pts[idx]


def _keys(pts: np.ndarray, q: int) -> np.ndarray:
    key = np.zeros(len(pts), dtype=object if q ** pts.shape[1] >= 2 ** 62 else np.int64)
    for j in range(pts.shape[1]):
        key = key * q + pts[:, j]
    return key


def support_gcd(pts: np.ndarray, weights: Sequence[int]) -> np.ndarray:
    """Per row, the gcd of the weights of the nonzero coordinates."""
    g = np.zeros(len(pts), dtype=np.int64)
    for j, w in enumerate(weights):
        g = np.gcd(g, np.where(pts[:, j] != 0, w, 0))
    return g


def canonical_points(pts: np.ndarray, amb: Ambient, fld: FiniteField) -> np.ndarray:
    """Row-wise lexicographically least representative of each geometric point.

    Two cone points are the same point of the weighted projective space iff
    ``y_i = lam**w_i x_i`` for some ``lam`` in the algebraic closure.  With
    ``g`` the gcd of the weights on the common support this is equivalent to
    ``y_i = nu**(w_i/g) x_i`` for some ``nu`` in ``F_q^*``, so a scan over the
    base field suffices.
    """
    q = fld.order
    best = pts.copy()
    if len(pts) == 0:
        return best
    g = support_gcd(pts, amb.weights)
    for gval in np.unique(g):
        if gval == 0:
            continue
        rows = np.nonzero(g == gval)[0]
        sub = pts[rows]
        reduced = [w // int(gval) for w in amb.weights]
        sub_best = sub.copy()
        best_key = _keys(sub_best, q)
        for nu in range(2, q):
            cand = np.empty_like(sub)
            for j, w in enumerate(reduced):
                cand[:, j] = fld.vscale(fld.pow(nu, w), sub[:, j])
            ck = _keys(cand, q)
            better = ck < best_key
            sub_best[better] = cand[better]
            best_key = np.where(better, ck, best_key)
        best[rows] = sub_best
    return best


def orbit_representatives(pts: np.ndarray, amb: Ambient, fld: FiniteField) -> np.ndarray:
    """One representative per weighted scalar orbit, sorted lexicographically."""
    if len(pts) == 0:
        return pts
    best = canonical_points(pts, amb, fld)
    _, idx = np.unique(_keys(best, fld.order), return_index=True)
    return _sort_rows(best[np.sort(idx)])


def stabilizer_order(coords: Sequence[int], weights: Sequence[int]) -> int:
    """Order of the (geometric) stabilizer of a cone point under ``C^*``."""
    g = 0
    for c, w in zip(coords, weights):
        if c:
            g = gcd(g, w)
    return g


def jacobian_rank(polys: Sequence[Polynomial], point: Sequence[int], fld,
                  columns: Sequence[int] | None = None) -> int:
    grads = [[p.derivative(i) for i in (columns if columns is not None else range(p.ambient.nvars))]
             for p in polys]
    rows = [[d.evaluate(point) for d in g] for g in grads]
    return _rank(rows, fld) if rows else 0


def _records(reps: np.ndarray, polys, fld, amb, columns=None) -> list[PointRecord]:
    grads = [[p.derivative(i) for i in (columns if columns is not None else range(amb.nvars))]
             for p in polys]
    out = []
    for row in reps:
        coords = tuple(int(x) for x in row)
        stab = stabilizer_order(coords, amb.weights)
        mat = [[d.evaluate(coords) for d in g] for g in grads]
        r = _rank(mat, fld) if mat else 0
        out.append(PointRecord(coords, stab, r))
    return out


def projective_points(polys: Sequence[Polynomial], fld: FiniteField, *, threads: int = 1,
                      required_roots: int | None = None,
                      allow_small_characteristic: bool = False,
                      eliminate: bool = True) -> list[PointRecord]:
    """Every point of the projective variety, with stabilizer and Jacobian rank."""
    _check_field(fld, polys, required_roots, allow_small_characteristic)
    amb = polys[0].ambient
    pts = cone_points(polys, fld, threads=threads, eliminate=eliminate)
    reps = orbit_representatives(pts, amb, fld)
    return _records(reps, polys, fld, amb)


def scan_cone_singular(polys: Sequence[Polynomial], fld: FiniteField, expected_rank: int, *,
                       threads: int = 1, required_roots: int | None = None,
                       allow_small_characteristic: bool = False,
                       eliminate: bool = True) -> list[PointRecord]:
    """Singular points of the projective variety ``{polys = 0}``.

    A point is reported when the Jacobian of the system has rank below
    ``expected_rank`` there (the cone is singular) or when its stabilizer
    under the weighted scalar action is nontrivial (a quotient point).
    """
    pts = projective_points(polys, fld, threads=threads, required_roots=required_roots,
                            allow_small_characteristic=allow_small_characteristic,
                            eliminate=eliminate)
    return [p for p in pts if p.jacobian_rank < expected_rank or p.stabilizer_order > 1]


def naive_scan(polys: Sequence[Polynomial], fld: FiniteField, expected_rank: int) -> list[PointRecord]:
    """Reference implementation: scalar loops, no pruning, no threads."""
    amb = polys[0].ambient
    q, n = fld.order, amb.nvars
    found = set()
    for pt in itertools.product(range(q), repeat=n):
        if not any(pt):
            continue
        if any(p.evaluate(pt) != 0 for p in polys):
            continue
        g = stabilizer_order(pt, amb.weights)
        orbit = []
        for nu in range(1, q):
            orbit.append(tuple(fld.mul(fld.pow(nu, w // g), x) for x, w in zip(pt, amb.weights)))
        found.add(min(orbit))
    out = []
    for rep in sorted(found):
        stab = stabilizer_order(rep, amb.weights)
        r = jacobian_rank(polys, rep, fld)
        if r < expected_rank or stab > 1:
            out.append(PointRecord(rep, stab, r))
    return out


@dataclass(frozen=True)
class StratumReport:
    stratum: tuple[str, ...]
    points: tuple[PointRecord, ...]
    verdict: str

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def all_transverse(self) -> bool:
        return self.verdict == "transverse"


def stratum_transverse(polys: Sequence[Polynomial], stratum: Sequence[str], fld: FiniteField, *,
                       threads: int = 1, required_roots: int | None = None,
                       allow_small_characteristic: bool = False) -> StratumReport:
    """Intersect the system with the coordinate stratum ``{x_s = 0 : s in stratum}``.

    At each intersection point the Jacobian in the remaining (free)
    directions must have rank equal to the number of equations, and the
    intersection must be finite, for the verdict to be ``"transverse"``.
    """
    _check_field(fld, polys, required_roots, allow_small_characteristic)
    amb = polys[0].ambient
    zero = tuple(amb.index(s) for s in stratum)
    free = [i for i in range(amb.nvars) if i not in zero]
    restricted = [p.restrict_zero(zero) for p in polys]
    live = [p for p in restricted if not p.is_zero()]
    pts = cone_points(live or restricted, fld, fixed_zero=zero, threads=threads)
    reps = orbit_representatives(pts, amb, fld)
    records = []
    for rec in _records(reps, live, fld, amb, columns=free):
        ok = rec.jacobian_rank == len(live) == len(free) - 1
        records.append(PointRecord(rec.coords, rec.stabilizer_order, rec.jacobian_rank, ok))
    if len(records) and (len(live) < len(restricted) or len(free) - len(live) > 1):
        verdict = "not transverse: positive-dimensional"
    elif all(r.transverse for r in records):
        verdict = "transverse"
    else:
        verdict = "not transverse: rank drop"
    return StratumReport(tuple(stratum), tuple(records), verdict)


@dataclass(frozen=True)
class BaseLocusReport:
    points: tuple[PointRecord, ...]
    orbits: tuple[tuple[int, ...], ...]

    @property
    def point_count(self) -> int:
        return len(self.points)

    @property
    def orbit_count(self) -> int:
        return len(self.orbits)


def group_orbits(points: Sequence[tuple[int, ...]], amb: Ambient, fld: FiniteField) -> list[tuple[int, ...]]:
    """Partition projective points under the diagonal ``Z/k`` action of the ambient.

    Returns index tuples into ``points``; orbits are listed by smallest member.
    """
    k = amb.group_order
    zeta = fld.primitive_root_of_unity(k)
    arr = np.array(points, dtype=np.int64).reshape(len(points), amb.nvars)
    index = {tuple(p): i for i, p in enumerate(points)}
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if len(points):
        moved = arr.copy()
        for j, c in enumerate(amb.char_weights):
            moved[:, j] = fld.vscale(fld.pow(zeta, c), arr[:, j])
        for i, img in enumerate(canonical_points(moved, amb, fld)):
            j = index.get(tuple(int(x) for x in img))
            if j is None:
                raise ScanError("group action does not preserve the point set")
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(len(points)):
        groups.setdefault(find(i), []).append(i)
    return [tuple(g) for _, g in sorted(groups.items())]


def base_locus(sections: Sequence[Polynomial], variety: Sequence[Polynomial], fld: FiniteField, *,
               threads: int = 1, required_roots: int | None = None,
               allow_small_characteristic: bool = False) -> BaseLocusReport:
    """Common zeros of ``sections`` on ``{variety = 0}``, grouped into group orbits."""
    polys = list(variety) + list(sections)
    _check_field(fld, polys, required_roots, allow_small_characteristic)
    amb = polys[0].ambient
    fld.primitive_root_of_unity(amb.group_order)
    reps = orbit_representatives(cone_points(polys, fld, threads=threads), amb, fld)
    records = tuple(_records(reps, list(variety), fld, amb))
    orbits = group_orbits([r.coords for r in records], amb, fld)
    return BaseLocusReport(records, tuple(orbits))


def simple_point(sections: Sequence[Polynomial], variety: Sequence[Polynomial],
                 point: Sequence[int], fld) -> bool:
    """True iff two of the sections cut the variety transversally at ``point``.

    Checked as: the stacked Jacobian of equations and sections has rank two
    more than the Jacobian of the equations alone.
    """
    if any(not fld.is_zero(p.evaluate(point)) for p in variety):
        raise ValueError(f"point {tuple(point)} is not on the variety")
    if any(not fld.is_zero(s.evaluate(point)) for s in sections):
        raise ValueError(f"point {tuple(point)} is not a base point of the sections")
    base = jacobian_rank(variety, point, fld) if variety else 0
    stacked = jacobian_rank(list(variety) + list(sections), point, fld)
    return stacked >= base + 2


__all__ = [
    "BaseLocusReport", "MIN_CHARACTERISTIC", "PointRecord", "ScanError", "StratumReport",
    "base_locus", "canonical_points", "choose_order", "cone_points", "group_orbits", "jacobian_rank", "naive_scan",
    "orbit_representatives", "projective_points", "scan_cone_singular", "simple_point",
    "stabilizer_order", "stratum_transverse",
]

