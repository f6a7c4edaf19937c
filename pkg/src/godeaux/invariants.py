"""Numerical invariants of bundles, divisors and cyclic quotient singularities.

Everything is exact.  The cohomological statements behind the bookkeeping
in :func:`destabilizer_obstruction` are not computed here; that function
only records which numerical case applies.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .fields import QQ
from .linalg import solve


class ParityError(ValueError):
    pass


@dataclass(frozen=True)
class DivisorNumerics:
    """``D^2`` and ``D.K`` of a divisor class on a smooth surface."""

    Dsq: int
    DK: int

    def __post_init__(self):
        if (self.Dsq - self.DK) % 2:
            raise ParityError(f"D^2 = {self.Dsq}, D.K = {self.DK}: not a divisor class on a smooth surface")

    def __neg__(self):
        return DivisorNumerics(self.Dsq, -self.DK)


def c2_exceptional(n: int, c1sq: int) -> Fraction:
    """The ``c2`` forced by ``chi(End E) = 1`` when ``chi(O) = 1``."""
    if n < 1:
        raise ValueError("rank must be positive")
    return Fraction(n - 1, 2 * n) * (c1sq + n + 1)


def chi_end(n: int, chiO: int, c1sq: int, c2) -> Fraction | int:
    v = n * n * chiO + (n - 1) * c1sq - 2 * n * Fraction(c2)
    return int(v) if v.denominator == 1 else v


@dataclass(frozen=True)
class BundleNumerics:
    n: int
    c1sq: int
    c1K: int
    c2: Fraction
    chiO: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("rank must be positive")
        if (self.c1sq - self.c1K) % 2:
            raise ParityError(f"c1^2 = {self.c1sq}, c1.K = {self.c1K}: not a divisor class on a smooth surface")
        object.__setattr__(self, "c2", Fraction(self.c2))

    @classmethod
    def exceptional(cls, n: int, c1sq: int, c1K: int, chiO: int = 1) -> "BundleNumerics":
        return cls(n, c1sq, c1K, c2_exceptional(n, c1sq), chiO)

    @property
    def chi_end(self):
        return chi_end(self.n, self.chiO, self.c1sq, self.c2)

    @property
    def slope_K(self) -> Fraction:
        return slope(self.c1K, self.n)

    @property
    def verdict(self) -> str:
        if self.c2.denominator != 1:
            return "no exceptional bundle with these invariants (c2 not integral)"
        if self.chi_end != 1:
            return f"not exceptional: chi(End E) = {self.chi_end}"
        return "numerically exceptional"


def chi_line(D: DivisorNumerics, chiO: int = 1) -> int:
    """Riemann-Roch for a line bundle."""
    return chiO + (D.Dsq - D.DK) // 2


def genus_adjunction(D: DivisorNumerics) -> int:
    return (D.Dsq + D.DK) // 2 + 1


def slope(c1H: int, r: int) -> Fraction:
    if r < 1:
        raise ValueError("rank must be positive")
    return Fraction(c1H, r)


@dataclass(frozen=True)
class Obstruction:
    n: int
    beta_is_sigma: bool
    verdict: str
    reason: str


def destabilizer_obstruction(n: int, beta_is_sigma: bool = False) -> Obstruction:
    """Case split for a would-be destabilising ``O(nK + beta)`` in a rank-2 bundle
    with ``c1 = K + sigma``, ``sigma`` torsion.

    ``Hom(O(D), E)`` injects into ``H^0(O((1-n)K + sigma - beta) (x) I_P)``.
    """
    if n < 1:
        raise ValueError(f"n = {n}: O(nK + beta) with n < 1 does not destabilise (slope <= 1/2)")
    if n > 1:
        return Obstruction(n, beta_is_sigma, "impossible: degree",
                           f"({1 - n})K + sigma - beta has negative degree against K, so is not effective")
    if beta_is_sigma:
        return Obstruction(n, True, "impossible: H⁰(I_P)=0",
                           "sigma - beta = 0 leaves H0(O (x) I_P), which vanishes")
    return Obstruction(n, False, "impossible: K-trivial nonzero class not effective",
                       "sigma - beta is a nonzero torsion class, hence has no sections")


# cyclic quotient singularities -----------------------------------------------

@dataclass(frozen=True)
class HJChain:
    selfints: tuple[int, ...]
    discrepancies: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        if not self.selfints or any(b < 2 for b in self.selfints):
            raise ValueError(f"chain entries must be >= 2, got {list(self.selfints)}")
        if not self.discrepancies:
            object.__setattr__(self, "discrepancies", tuple(discrepancies(self.selfints)))

    @property
    def value(self) -> Fraction:
        return continued_fraction(self.selfints)

    def __str__(self):
        return "[" + ",".join(map(str, self.selfints)) + "]"


def continued_fraction(bs: Sequence[int]) -> Fraction:
    """``b1 - 1/(b2 - 1/(...))``."""
    v = Fraction(bs[-1])
    for b in reversed(bs[:-1]):
        v = b - 1 / v
    return v


def hj_expand(N: int, q: int) -> HJChain:
    if N < 2 or not 0 < q < N:
        raise ValueError(f"need N >= 2 and 0 < q < N, got ({N}, {q})")
    if gcd(N, q) != 1:
        raise ValueError(f"gcd({N}, {q}) = {gcd(N, q)} != 1")
    bs = []
    a, b = N, q
    while b:
        c = -(-a // b)
        bs.append(c)
        a, b = b, c * b - a
    return HJChain(tuple(bs))


def intersection_matrix(bs: Sequence[int]) -> list[list[int]]:
    k = len(bs)
    return [[-bs[i] if i == j else (1 if abs(i - j) == 1 else 0) for j in range(k)] for i in range(k)]


def discrepancies(bs: Sequence[int]) -> list[Fraction]:
    """``d`` with ``K~ = pi*K + sum d_i E_i``: solves ``sum_i d_i E_i.E_j = b_j - 2``.

    The intersection matrix of a chain is tridiagonal, so a forward sweep and
    back substitution suffice.
    """
    k = len(bs)
    # row j: d_{j-1} - b_j d_j + d_{j+1} = b_j - 2
    diag = [Fraction(-b) for b in bs]
    rhs = [Fraction(b - 2) for b in bs]
    for j in range(1, k):
        if diag[j - 1] == 0:
            raise ArithmeticError(f"chain {list(bs)} has a degenerate intersection matrix")
        f = 1 / diag[j - 1]
        diag[j] -= f
        rhs[j] -= f * rhs[j - 1]
    if diag[-1] == 0:
        raise ArithmeticError(f"chain {list(bs)} has a degenerate intersection matrix")
    d = [Fraction(0)] * k
    d[-1] = rhs[-1] / diag[-1]
    for j in range(k - 2, -1, -1):
        d[j] = (rhs[j] - d[j + 1]) / diag[j]
    return d


def discrepancies_dense(bs: Sequence[int]) -> list[Fraction]:
    """Same answer through a general exact solve; kept as a cross-check."""
    M = [[Fraction(x) for x in row] for row in intersection_matrix(bs)]
    sol = solve(M, [Fraction(b - 2) for b in bs], QQ)
    if sol is None or sol[1]:
        raise ArithmeticError(f"chain {list(bs)} has a degenerate intersection matrix")
    return list(sol[0])


@dataclass(frozen=True)
class WahlType:
    n: int
    a: int

    def __post_init__(self):
        if self.n < 2 or not 0 < self.a < self.n or gcd(self.n, self.a) != 1:
            raise ValueError(f"invalid Wahl parameters ({self.n}, {self.a})")

    @property
    def singularity(self) -> tuple[int, int]:
        return self.n * self.n, self.n * self.a - 1

    def equivalent(self, other: "WahlType") -> bool:
        """``a`` and ``n - a`` describe the same singularity with the coordinates swapped."""
        return self.n == other.n and self.a in (other.a, other.n - other.a)


def is_wahl(N: int, q: int) -> WahlType | None:
    """``(n, a)`` when ``1/N(1, q)`` is ``1/n^2(1, na - 1)``."""
    if gcd(N, q) != 1:
        raise ValueError(f"gcd({N}, {q}) != 1")
    n = isqrt(N)
    if n < 2 or n * n != N or (q + 1) % n:
        return None
    a = (q + 1) // n
    if 0 < a < n and gcd(a, n) == 1:
        return WahlType(n, a)
    return None


def same_singularity(N: int, q: int, q2: int) -> bool:
    """``1/N(1,q)`` and ``1/N(1,q2)`` agree up to swapping coordinates."""
    return (q - q2) % N == 0 or (q * q2 - 1) % N == 0


def ksq_drop_check(chain: HJChain, K_X_sq) -> Fraction:
    """``K~^2 = K_X^2 + (sum d_i E_i)^2``."""
    M = intersection_matrix(chain.selfints)
    d = chain.discrepancies
    quad = sum(d[i] * M[i][j] * d[j] for i in range(len(d)) for j in range(len(d)))
    return Fraction(K_X_sq) + quad


__all__ = [
    "BundleNumerics", "DivisorNumerics", "HJChain", "Obstruction", "ParityError", "WahlType",
    "c2_exceptional", "chi_end", "chi_line", "continued_fraction", "destabilizer_obstruction",
    "discrepancies", "discrepancies_dense", "genus_adjunction", "hj_expand", "intersection_matrix", "is_wahl",
    "ksq_drop_check", "same_singularity", "slope",
]
