"""Divisibility of the canonical class on the KLP-type special fiber.

Input is a Gram fixture on ``C1..C14, S1, S2`` (see ``data/klp_fiber.gram``).
The form is degenerate; ``A = <C1..C14, S1>`` is nondegenerate and ``S2``
is recovered in ``A (x) Q`` from its intersection numbers.  The class group
modulo torsion is ``L = A + Z*G + Z*S2`` with ``G = F/2`` half the fiber.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fields import QQ
from .linalg import rank
from .lattice import (GramLattice, Overlattice, SpanSolution, is_divisible_mod, mod2_quotient,
                      overlattice, solve_in_span, sublattice_index)

A_LABELS = tuple(f"C{i}" for i in range(1, 15)) + ("S1",)
M_LABELS = ("C2", "C3", "C4", "C5", "C7", "C8", "C9", "C10", "S1", "S2")
K_LABELS = ("C1", "C11", "C12", "C13", "C14")
FIBER = {"C1": 2, **{f"C{i}": 1 for i in range(2, 15)}}

# S1 - S2 = X_PARTICULAR + t * X_KERNEL on C1..C14
X_PARTICULAR = tuple(Fraction(-c, 3) for c in (14, 5, 4, 3, 5, 7, 9, 11, 10, 9, 12, 2, 14, 0))
X_KERNEL = (2,) + (1,) * 13


@dataclass(frozen=True)
class KLPReport:
    rank: int
    det_A: int
    index_L_A: int
    index_N_A: int
    index_L_N: int
    x: SpanSolution
    x_matches: bool
    k_two_divisible: bool
    mod2_dimension: int
    k_image: tuple[int, ...]
    k_congruent_c1_c6: bool


def _family_matches(sol: SpanSolution) -> bool:
    """Is ``sol`` the affine line ``X_PARTICULAR + Q * X_KERNEL``?"""
    if sol is None or len(sol.kernel) != 1:
        return False
    k = sol.kernel[0]
    pivot = next(i for i, c in enumerate(k) if c)
    if any(c * X_KERNEL[pivot] != X_KERNEL[i] * k[pivot] for i, c in enumerate(k)):
        return False
    diff = [a - b for a, b in zip(sol.particular, X_PARTICULAR)]
    t = diff[pivot] / X_KERNEL[pivot]
    return all(d == t * x for d, x in zip(diff, X_KERNEL))


def class_lattice(fiber: GramLattice) -> tuple[GramLattice, Overlattice, dict[str, tuple[Fraction, ...]]]:
    """``(A, L, classes)``: classes maps each fixture label to its ``A (x) Q`` coordinates."""
    A = fiber.sublattice(A_LABELS)
    n = A.rank
    classes = {lab: tuple(Fraction(int(i == j)) for j in range(n)) for i, lab in enumerate(A_LABELS)}
    # S2 from its pairings with A; unique because A is nondegenerate
    gens = [fiber.basis_vector(lab) for lab in A_LABELS]
    sol = solve_in_span(fiber.basis_vector("S2"), gens, fiber)
    if sol is None or sol.kernel:
        raise ValueError("S2 is not determined by its intersection numbers with A")
    classes["S2"] = sol.particular
    half_fiber = tuple(Fraction(FIBER.get(lab, 0), 2) for lab in A_LABELS)
    L = overlattice(A, [half_fiber, classes["S2"]], labels=[f"l{i + 1}" for i in range(n)])
    classes["G"] = half_fiber
    return A, L, classes


def analyse(fiber: GramLattice) -> KLPReport:
    A, L, classes = class_lattice(fiber)
    in_L = {lab: L.coords(v) for lab, v in classes.items()}
    a_gens = [in_L[lab] for lab in A_LABELS]
    index_L_A = sublattice_index(L.lattice, a_gens)
    index_L_N = sublattice_index(L.lattice, a_gens + [in_L["G"]])
    index_N_A = index_L_A // index_L_N

    cs = [fiber.basis_vector(f"C{i}") for i in range(1, 15)]
    s1_minus_s2 = tuple(a - b for a, b in zip(fiber.basis_vector("S1"), fiber.basis_vector("S2")))
    x = solve_in_span(s1_minus_s2, cs, fiber)

    K = tuple(sum(c) for c in zip(*(in_L[lab] for lab in K_LABELS)))
    M = [in_L[lab] for lab in M_LABELS]
    q = mod2_quotient(L.lattice, M)
    residual = tuple(k - a - b for k, a, b in zip(K, in_L["C1"], in_L["C6"]))
    return KLPReport(
        rank=rank([[Fraction(x) for x in row] for row in fiber.gram], QQ),
        det_A=A.det(),
        index_L_A=index_L_A,
        index_N_A=index_N_A,
        index_L_N=index_L_N,
        x=x,
        x_matches=_family_matches(x),
        k_two_divisible=is_divisible_mod(K, 2, L.lattice, M),
        mod2_dimension=q.dimension,
        k_image=q.image(K),
        k_congruent_c1_c6=is_divisible_mod(residual, 2, L.lattice, M),
    )


__all__ = ["A_LABELS", "K_LABELS", "KLPReport", "M_LABELS", "X_KERNEL", "X_PARTICULAR", "analyse",
           "class_lattice"]
