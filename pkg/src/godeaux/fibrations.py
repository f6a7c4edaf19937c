"""Multiple-fiber configurations of an elliptic surface with a (-4)-section curve.

The canonical bundle formula gives ``K = lam * A`` with
``lam = -1 + sum (m_i - 1)/m_i`` and, pairing with a (-4)-curve meeting a
fiber ``n`` times, ``lam * n = 2``.  So the multiplicities solve

    sum (1 - 1/m_i) = 1 + 2/n,   m_i >= 2,   m_i | n.

:func:`enumerate_configs` finds every solution, deriving its search bounds
from the equation rather than assuming them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .lattice import AbelianGroup, quotient_group, GramLattice


@dataclass(frozen=True, order=True)
class FibrationConfig:
    multiplicities: tuple[int, ...]
    n: int

    def __post_init__(self):
        ms = tuple(sorted(self.multiplicities))
        object.__setattr__(self, "multiplicities", ms)
        if any(m < 2 for m in ms):
            raise ValueError("multiplicities must be >= 2")
        if any(self.n % m for m in ms):
            raise ValueError(f"each multiplicity must divide n = {self.n}")
        if sum(1 - Fraction(1, m) for m in ms) != 1 + Fraction(2, self.n):
            raise ValueError(f"{self} does not satisfy the canonical bundle equation")

    @property
    def lam(self) -> Fraction:
        return canonical_multiple(self)

    @property
    def r(self) -> int:
        return len(self.multiplicities)

    def __str__(self):
        return f"({','.join(map(str, self.multiplicities))};{self.n})"


def _sort_key(c: FibrationConfig):
    return (c.r, c.multiplicities, c.n)


def enumerate_configs(max_fibers: int = 4) -> list[FibrationConfig]:
    """All solutions with at most ``max_fibers`` multiple fibers.

    Bounds used (all consequences of the equation):

    * ``n >= m_r >= 2``, so the right side lies in ``(1, 2]``; every term
      is at least 1/2, so at most four fibers can occur;
    * the last multiplicity satisfies ``m_r * s <= 3`` where ``s`` is the
      sum of the other terms (from ``2/n <= 2/m_r``);
    * an earlier ``m`` with ``k`` terms still to place (itself included)
      and partial sum ``s`` needs ``m*s + (k-1)(m-1) <= 3``, because every
      later term is at least ``1 - 1/m`` and the last multiplicity is ``>= m``.
    """
    if max_fibers < 2:
        raise ValueError("max_fibers must be at least 2")
    out: list[FibrationConfig] = []
    max_r = min(max_fibers, 4)

    def place(prefix: list[int], s: Fraction, k: int):
        lo = prefix[-1] if prefix else 2
        if k == 1:
            m = lo
            while m * s <= 3:
                gap = s - Fraction(1, m)
                if gap > 0:
                    n = 2 / gap
                    ms = prefix + [m]
                    if n.denominator == 1 and all(int(n) % x == 0 for x in ms):
                        out.append(FibrationConfig(tuple(ms), int(n)))
                m += 1
            return
        m = lo
        while m * s + (k - 1) * (m - 1) <= 3:
            place(prefix + [m], s + 1 - Fraction(1, m), k - 1)
            m += 1

    for r in range(2, max_r + 1):
        place([], Fraction(0), r)
    return sorted(out, key=_sort_key)


def brute_force_configs(max_m: int = 12, max_n: int = 24, max_fibers: int = 4) -> list[FibrationConfig]:
    """Reference search over a box, no derived bounds."""
    from itertools import combinations_with_replacement

    out = []
    for r in range(2, max_fibers + 1):
        for ms in combinations_with_replacement(range(2, max_m + 1), r):
            for n in range(1, max_n + 1):
                if all(n % m == 0 for m in ms) and sum(1 - Fraction(1, m) for m in ms) == 1 + Fraction(2, n):
                    out.append(FibrationConfig(ms, n))
    return sorted(out, key=_sort_key)


def case_labels(configs: Iterable[FibrationConfig]) -> dict[FibrationConfig, str]:
    """Letters a, b, ... by fiber count, then by decreasing multiplicities."""
    ordered = sorted(configs, key=lambda c: (c.r, tuple(-m for m in c.multiplicities)))
    return {c: chr(ord("a") + i) for i, c in enumerate(ordered)}


def orbifold_h1(multiplicities: Sequence[int]) -> AbelianGroup:
    """``H_1`` of the orbifold sphere: ``<g_1..g_r | m_i g_i = 0, sum g_i = 0>``."""
    r = len(multiplicities)
    if r == 0 or any(m < 2 for m in multiplicities):
        raise ValueError("multiplicities must be >= 2")
    rows = [[m if i == j else 0 for j in range(r)] for i, m in enumerate(multiplicities)]
    rows.append([1] * r)
    free = GramLattice([[0] * r for _ in range(r)], tuple(f"g{i + 1}" for i in range(r)))
    return quotient_group(free, rows)


@dataclass(frozen=True)
class Admissible:
    """A possible ``H_1(Y) = Z/d`` mapping onto ``H_1(X)`` with kernel of order 1 or 2."""

    order: int
    kernel: int

    @property
    def relation(self) -> str:
        return "H1(Y) = H1(X)" if self.kernel == 1 else "kernel Z/2"


@dataclass(frozen=True)
class FilteredConfig:
    config: FibrationConfig
    h1: AbelianGroup
    admissible: tuple[Admissible, ...]


def admissible_orders(h1: AbelianGroup, max_order: int = 5) -> tuple[Admissible, ...]:
    """Cyclic ``Z/d``, ``d <= max_order``, surjecting onto ``h1`` with kernel trivial or ``Z/2``."""
    if not h1.is_cyclic or h1.free_rank:
        return ()
    c = h1.order
    return tuple(Admissible(d, d // c) for d in range(1, max_order + 1) if d % c == 0 and d // c in (1, 2))


def godeaux_filter(configs: Iterable[FibrationConfig], max_order: int = 5) -> list[FilteredConfig]:
    out = []
    for c in configs:
        h1 = orbifold_h1(c.multiplicities)
        adm = admissible_orders(h1, max_order)
        if adm:
            out.append(FilteredConfig(c, h1, adm))
    return out


def canonical_multiple(config: FibrationConfig) -> Fraction:
    return -1 + sum(Fraction(m - 1, m) for m in config.multiplicities)


def lambda_lcm(config: FibrationConfig) -> Fraction:
    if config.r != 2:
        raise ValueError("criterion stated for two multiple fibers")
    return canonical_multiple(config) * lcm(*config.multiplicities)


def k_two_divisible(config: FibrationConfig) -> bool:
    """``K`` is 2-divisible iff ``lam * lcm(m1, m2)`` is an even integer."""
    v = lambda_lcm(config)
    return v.denominator == 1 and v.numerator % 2 == 0


@dataclass(frozen=True)
class ReportRow:
    case: str
    config: FibrationConfig
    h1_x: AbelianGroup
    h1_y: int
    relation: str
    lam: Fraction
    lam_lcm: Fraction
    two_divisible: bool
    verdict: str
    note: str = ""


def correspondence_report(filtered: Sequence[FilteredConfig],
                          labels: dict[FibrationConfig, str] | None = None,
                          constructed: Iterable[str] = ("a", "b", "d", "e")) -> list[ReportRow]:
    """One row per (configuration, admissible H1(Y)).

    ``constructed`` lists the case letters for which an explicit
    degeneration is known; the others get a note.
    """
    labels = labels or case_labels(f.config for f in filtered)
    constructed = set(constructed)
    rows = []
    for f in filtered:
        case = labels.get(f.config, "?")
        div = k_two_divisible(f.config)
        for adm in f.admissible:
            if adm.kernel != 1:
                verdict = "bundle construction needs H1(Y) = H1(X)"
            elif div:
                verdict = "produces exceptional bundle with c1 = K+sigma"
            else:
                verdict = "no c1 = K bundle from this boundary"
            note = "" if case in constructed else "degeneration construction not exhibited"
            rows.append(ReportRow(case, f.config, f.h1, adm.order, adm.relation,
                                  canonical_multiple(f.config), lambda_lcm(f.config), div, verdict, note))
    return rows


def rows_with_h1(rows: Sequence[ReportRow], order: int) -> list[ReportRow]:
    return [r for r in rows if r.h1_y == order]


__all__ = [
    "Admissible", "FibrationConfig", "FilteredConfig", "ReportRow", "admissible_orders",
    "brute_force_configs", "canonical_multiple", "case_labels", "correspondence_report",
    "enumerate_configs", "godeaux_filter", "k_two_divisible", "lambda_lcm", "orbifold_h1",
    "rows_with_h1",
]


