"""Named verification recipes and the ``verify-all`` ledger.

A recipe runs library code, then compares each result with an expected
value.  Every comparison is exact equality on ints, strings, booleans,
rationals or lists of these.  A recipe whose fixture file cannot be found
reports ``pending-fixture`` instead of failing.
"""
from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Callable

PASS, FAIL, PENDING = "pass", "fail", "pending-fixture"
PROVENANCES = ("source", "trivial", "derived")
FIXTURES_ENV = "GODEAUX_FIXTURES"


@dataclass(frozen=True)
class Check:
    name: str
    expected: Any
    actual: Any
    provenance: str

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def as_dict(self) -> dict:
        return {"name": self.name, "expected": to_plain(self.expected), "actual": to_plain(self.actual),
                "provenance": self.provenance, "ok": self.ok}


@dataclass
class Report:
    recipe: str
    statement: str
    status: str
    checks: list[Check] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    message: str = ""
    seconds: float = 0.0

    def as_dict(self, timings: bool = False) -> dict:
        out = {"recipe": self.recipe, "statement": self.statement, "status": self.status,
               "checks": [c.as_dict() for c in self.checks], "details": to_plain(self.details)}
        if self.message:
            out["message"] = self.message
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass(frozen=True)
class Options:
    threads: int = 1
    fixtures_dir: Path | None = None
    include_slow: bool = True


class MissingFixture(FileNotFoundError):
    pass


def to_plain(x):
    """JSON-friendly copy: rationals and groups become strings."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): to_plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_plain(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


def fixtures_dir(options: Options) -> Path | None:
    """Explicit option, then the environment variable, else ``None`` (packaged data)."""
    if options.fixtures_dir is not None:
        return Path(options.fixtures_dir)
    env = os.environ.get(FIXTURES_ENV)
    return Path(env) if env else None


def resolve_fixture(name: str, options: Options) -> Path:
    base = fixtures_dir(options)
    if base is None:
        path = Path(str(resources.files("godeaux") / "data" / name))
    else:
        path = base / name
    if not path.is_file():
        raise MissingFixture(f"fixture {name} not found at {path}")
    return path


@dataclass(frozen=True)
class Recipe:
    id: str
    statement: str
    run: Callable[[Options], tuple[list[Check], dict]]
    slow: bool = False


# individual recipes ----------------------------------------------------------

def _thm_cases(options):
    from .fibrations import case_labels, enumerate_configs, godeaux_filter

    raw = enumerate_configs(4)
    kept = godeaux_filter(raw)
    labels = case_labels(raw)
    ordered = sorted(raw, key=lambda c: labels[c])
    checks = [
        Check("raw configurations", ["(4,4;4)", "(3,3;6)", "(2,6;6)", "(2,4;8)", "(2,3;12)",
                                      "(2,2,2;4)", "(2,2,2,2;2)"], [str(c) for c in ordered], "source"),
        Check("surviving the H1 filter", ["(4,4;4)", "(3,3;6)", "(2,6;6)", "(2,4;8)", "(2,3;12)"],
              [str(f.config) for f in sorted(kept, key=lambda f: labels[f.config])], "source"),
        Check("lambda of (4,4;4)", Fraction(1, 2), next(c.lam for c in raw if c.multiplicities == (4, 4)), "source"),
        Check("lambda of (2,3;12)", Fraction(1, 6), next(c.lam for c in raw if c.multiplicities == (2, 3)), "source"),
        Check("lambda * n = 2 for every configuration", True, all(c.lam * c.n == 2 for c in raw), "trivial"),
        Check("admissible H1(Y) for (2,3;12)", [1, 2],
              [a.order for f in kept if f.config.multiplicities == (2, 3) for a in f.admissible], "derived"),
    ]
    details = {"cases": {labels[c]: str(c) for c in ordered}}
    return checks, details


def _orbifold_h1(options):
    from .fibrations import orbifold_h1

    expected = {(4, 4): "Z/4", (3, 3): "Z/3", (2, 6): "Z/2", (2, 4): "Z/2", (2, 3): "0",
                (2, 2, 2): "Z/2 + Z/2", (2, 2, 2, 2): "Z/2 + Z/2 + Z/2"}
    checks = [Check(f"H1 for {ms}", want, str(orbifold_h1(ms)), "source") for ms, want in expected.items()]
    return checks, {}


def _c_2_div(options):
    from .fibrations import (case_labels, correspondence_report, enumerate_configs, godeaux_filter,
                             k_two_divisible, lambda_lcm, rows_with_h1)

    raw = enumerate_configs(4)
    labels = case_labels(raw)
    kept = sorted(godeaux_filter(raw), key=lambda f: labels[f.config])
    rows = correspondence_report(kept, labels)
    a_rows = [r for r in rows if r.case == "a" and r.h1_y == 4]
    checks = [
        Check("2-divisible over cases a..e", [True, False, True, False, False],
              [k_two_divisible(f.config) for f in kept], "source"),
        Check("lambda * lcm over cases a..e", [2, 1, 2, 1, 1], [lambda_lcm(f.config) for f in kept], "source"),
        Check("case a with H1 = Z/4", "produces exceptional bundle with c1 = K+sigma",
              a_rows[0].verdict if a_rows else None, "source"),
        Check("rows with H1(Y) = Z/5", 0, len(rows_with_h1(rows, 5)), "source"),
        Check("case c flagged as not constructed", True,
              all(r.note for r in rows if r.case == "c"), "source"),
    ]
    details = {"rows": [{"case": r.case, "config": str(r.config), "H1(X)": str(r.h1_x), "H1(Y)": f"Z/{r.h1_y}",
                         "relation": r.relation, "lambda*lcm": r.lam_lcm, "2-divisible": r.two_divisible,
                         "verdict": r.verdict, "note": r.note} for r in rows]}
    return checks, details


def _lem_c1(options):
    from .weyl import F2Class, all_classes, orbit_table, orbits_mod2, qmod4_is

    keep = qmod4_is(1)
    runs = [orbits_mod2(keep, shuffle=random.Random(seed)) for seed in (1, 2)]
    plain = orbits_mod2(keep)
    table = orbit_table(plain)
    brute = sum(1 for n in range(512)
                if keep(F2Class.of(tuple((n >> (8 - i)) & 1 for i in range(9)))))
    checks = [
        Check("orbit count (v^2 = 1 mod 4)", 2, len(plain), "source"),
        Check("representatives", ["[H]", "[K]"], sorted(r.representative for r in table), "source"),
        Check("partition stable under generator shuffles", True, runs[0] == runs[1] == plain, "derived"),
        Check("classes covered vs brute force", brute, sum(r.size for r in table), "derived"),
        Check("class count from all_classes", len([c for c in all_classes() if keep(c)]), brute, "derived"),
    ]
    details = {"orbits": [{"representative": r.representative, "size": r.size, "qmod4": r.qmod4} for r in table]}
    return checks, details


def _bundle_numerics(options):
    from .invariants import (DivisorNumerics, c2_exceptional, chi_end, chi_line, destabilizer_obstruction,
                             genus_adjunction, slope)

    L = DivisorNumerics(-3, -1)
    checks = [
        Check("c2 of exceptional rank 2, c1^2 = 1", 1, c2_exceptional(2, 1), "source"),
        Check("chi(End E) for (2,1,1,1)", 1, chi_end(2, 1, 1, 1), "source"),
        Check("slope(1, 2)", Fraction(1, 2), slope(1, 2), "source"),
        Check("p_a for C^2 = C.K = 1", 2, genus_adjunction(DivisorNumerics(1, 1)), "source"),
        Check("p_a for D^2 = -3, D.K = 1", 0, genus_adjunction(DivisorNumerics(-3, 1)), "source"),
        Check("chi(L), L^2 = -3, L.K = -1", 0, chi_line(L), "source"),
        Check("chi of the dual", -1, chi_line(-L), "source"),
        Check("c2 for rank 2, c1^2 = -3 (Whitney)", 0, c2_exceptional(2, -3), "derived"),
        Check("destabilizer verdicts", ["impossible: degree", "impossible: H⁰(I_P)=0",
                                        "impossible: K-trivial nonzero class not effective"],
              [destabilizer_obstruction(2).verdict, destabilizer_obstruction(1, True).verdict,
               destabilizer_obstruction(1, False).verdict], "source"),
    ]
    return checks, {}


def _resolution(options):
    from .invariants import WahlType, hj_expand, is_wahl, ksq_drop_check

    c4 = hj_expand(4, 1)
    c36 = hj_expand(36, 5)
    c16 = hj_expand(16, 3)
    w16 = is_wahl(16, 3)
    checks = [
        Check("chain of 1/4(1,1)", [4], list(c4.selfints), "source"),
        Check("discrepancy of the (-4)-curve", [Fraction(-1, 2)], list(c4.discrepancies), "source"),
        Check("K^2 after resolving, K_X^2 = 1", 0, ksq_drop_check(c4, 1), "source"),
        Check("chain of 1/36(1,5)", [8, 2, 2, 2, 2], list(c36.selfints), "derived"),
        Check("chain of 1/16(1,3)", [6, 2, 2], list(c16.selfints), "derived"),
        Check("round trips", [Fraction(36, 5), Fraction(16, 3)], [c36.value, c16.value], "derived"),
        Check("Wahl type of 1/36(1,5)", WahlType(6, 1), is_wahl(36, 5), "derived"),
        Check("1/16(1,3) is Wahl with n = 4, equivalent to a = 3", True,
              w16 is not None and w16.equivalent(WahlType(4, 3)), "derived"),
        Check("1/16(1,5) is not Wahl", None, is_wahl(16, 5), "trivial"),
    ]
    return checks, {"wahl_16_3": str(w16)}


def _p4(prime):
    def run(options):
        from .wps.scan import scan_cone_singular, stratum_transverse
        from .wps.system import load_system

        system = load_system(resolve_fixture("p4_degeneration.sys", options))
        fld = system.field(prime)
        eqs = system.equations_over(fld)
        report = stratum_transverse(eqs, system.stratum, fld, threads=options.threads,
                                    required_roots=system.roots)
        sing = scan_cone_singular(eqs, fld, system.expected_rank, threads=options.threads,
                                  required_roots=system.roots)
        zero = system.stratum_indices()
        off = [p for p in sing if any(p.coords[i] for i in zero)]
        checks = [
            Check("points on the stratum", 4, report.count, "source"),
            Check("stratum verdict", "transverse", report.verdict, "source"),
            Check("singular points off the stratum", 0, len(off), "source"),
            Check("every singular point lies on the stratum", report.count, len(sing), "derived"),
        ]
        details = {"field": str(fld), "stratum": list(system.stratum),
                   "points": [p.as_dict(fld) for p in report.points]}
        return checks, details
    return run


def _base_locus(prime):
    def run(options):
        from .wps.scan import base_locus, simple_point
        from .wps.system import load_system

        system = load_system(resolve_fixture("z4_cover.sys", options))
        fld = system.field(prime)
        eqs, secs = system.equations_over(fld), system.sections_over(fld)
        rep = base_locus(secs, eqs, fld, threads=options.threads, required_roots=system.roots)
        simple = [simple_point(secs, eqs, p.coords, fld) for p in rep.points]
        checks = [
            Check("base points", 16, rep.point_count, "source"),
            Check("group orbits", 4, rep.orbit_count, "source"),
            Check("orbit sizes", [4, 4, 4, 4], [len(o) for o in rep.orbits], "derived"),
            Check("all simple", True, all(simple), "source"),
        ]
        details = {"field": str(fld), "points": [p.as_dict(fld) for p in rep.points],
                   "orbits": [list(o) for o in rep.orbits]}
        return checks, details
    return run


FERMAT_SEED = 5


def _fermat(options, count=3):
    from .fields import CyclotomicField
    from .wps.fermat import deforms, fermat, lines_on_fermat_quintic, quartic_cofactors, random_invariant_quintic

    fld = CyclotomicField(5)
    lines = lines_on_fermat_quintic(fld)
    rng = random.Random(FERMAT_SEED)
    Gs = [random_invariant_quintic(fld, rng) for _ in range(count)]
    cofactor_ok = True
    deforming = 0
    for line in lines:
        A, B = quartic_cofactors(line)
        cofactor_ok &= A * line.X + B * line.Y == fermat(line.X.ambient, fld)
        deforming += sum(bool(deforms(line, G)) for G in Gs)
    F = fermat(lines[0].X.ambient, fld)
    A, B = quartic_cofactors(lines[0])
    positive = deforms(lines[0], F + A * lines[0].X)
    checks = [
        Check("lines found", 75, len(lines), "source"),
        Check("F = A X + B Y recovered for every line", True, cofactor_ok, "source"),
        Check("random invariant quintics tested", count, len(Gs), "source"),
        Check("(line, G) pairs that deform", 0, deforming, "source"),
        Check("positive control in (X, Y, A, B)", True, bool(positive), "derived"),
    ]
    return checks, {"field": str(fld), "seed": FERMAT_SEED, "lines": [l.describe() for l in lines[:3]] + ["..."]}


def _p3(prime):
    def run(options):
        from .wps.scan import scan_cone_singular
        from .wps.system import load_system

        system = load_system(resolve_fixture("p3_degeneration.sys", options))
        fld = system.field(prime)
        eqs = system.equations_over(fld)
        amb = system.ambient
        sing = scan_cone_singular(eqs, fld, system.expected_rank, threads=options.threads)
        ys = [amb.index(v) for v in ("y0", "y1", "y2")]
        others = [i for i in range(amb.nvars) if i not in ys]
        pattern = sorted(tuple(p.coords[i] for i in ys) for p in sing
                         if all(p.coords[i] == 0 for i in others))
        checks = [
            Check("singular points", 3, len(sing), "source"),
            Check("x = z = 0 at each", [(0, 0, 1), (0, 1, 0), (1, 0, 0)], pattern, "source"),
            Check("stabilizer orders", [2, 2, 2], [p.stabilizer_order for p in sing], "derived"),
        ]
        return checks, {"field": str(fld), "points": [p.as_dict(fld) for p in sing]}
    return run


def _klp(options):
    from .klp import analyse
    from .lattice import load_gram

    r = analyse(load_gram(resolve_fixture("klp_fiber.gram", options)))
    checks = [
        Check("rank of the fiber form", 15, r.rank, "derived"),
        Check("|L/A|", 6, r.index_L_A, "source"),
        Check("|N/A|", 2, r.index_N_A, "source"),
        Check("|L/N|", 3, r.index_L_N, "source"),
        Check("S1 - S2 coefficient family", True, r.x_matches, "source"),
        Check("K 2-divisible modulo M", False, r.k_two_divisible, "source"),
        Check("K = C1 + C6 modulo 2L + M", True, r.k_congruent_c1_c6, "source"),
    ]
    details = {"det_A": r.det_A, "mod2_dimension": r.mod2_dimension, "k_image": list(r.k_image),
               "x_particular": list(r.x.particular), "x_kernel": [list(k) for k in r.x.kernel]}
    return checks, details


RECIPES: tuple[Recipe, ...] = (
    Recipe("thm-cases", "multiple-fiber configurations and the H1 filter", _thm_cases),
    Recipe("orbifold-h1", "first homology of each orbifold base", _orbifold_h1),
    Recipe("c-2-div", "2-divisibility of K over the surviving cases", _c_2_div),
    Recipe("lem-c1", "two W(E8) orbits of first Chern classes with odd square", _lem_c1),
    Recipe("bundle-numerics", "Chern and Euler characteristic numerics", _bundle_numerics),
    Recipe("resolution", "Hirzebruch-Jung chains, discrepancies and Wahl types", _resolution),
    Recipe("prop-p4[p=17]", "four transverse quotient points on u0 = u1 = 0", _p4(17)),
    Recipe("prop-p4[p=41]", "four transverse quotient points on u0 = u1 = 0", _p4(41)),
    Recipe("base-locus[p=73]", "16 simple base points in 4 orbits", _base_locus(73)),
    Recipe("base-locus[p=89]", "16 simple base points in 4 orbits", _base_locus(89)),
    Recipe("fermat-z5", "no line of the Fermat quintic survives an invariant deformation", _fermat),
    Recipe("prop-p3[p=11]", "three 1/4(1,1) points where x = z = 0", _p3(11), slow=True),
    Recipe("prop-p3[p=13]", "three 1/4(1,1) points where x = z = 0", _p3(13), slow=True),
    Recipe("prop-d-2div", "K is not 2-divisible on the KLP-type fiber", _klp),
)


def recipe_ids() -> list[str]:
    return [r.id for r in RECIPES]


def get_recipe(recipe_id: str) -> Recipe:
    for r in RECIPES:
        if r.id == recipe_id:
            return r
    # bare names select the first prime
    for r in RECIPES:
        if r.id.split("[")[0] == recipe_id:
            return r
    raise KeyError(f"unknown recipe {recipe_id!r}; choose from {', '.join(recipe_ids())}")


def run(recipe: Recipe | str, options: Options | None = None) -> Report:
    recipe = get_recipe(recipe) if isinstance(recipe, str) else recipe
    options = options or Options()
    start = time.perf_counter()
    try:
        checks, details = recipe.run(options)
    except MissingFixture as exc:
        return Report(recipe.id, recipe.statement, PENDING, message=str(exc),
                      seconds=time.perf_counter() - start)
    except Exception as exc:  # a crash is a failed recipe, not a crashed ledger
        return Report(recipe.id, recipe.statement, FAIL, message=f"{type(exc).__name__}: {exc}",
                      seconds=time.perf_counter() - start)
    status = PASS if all(c.ok for c in checks) else FAIL
    return Report(recipe.id, recipe.statement, status, checks, details, seconds=time.perf_counter() - start)


def verify_all(options: Options | None = None) -> list[Report]:
    options = options or Options()
    return [run(r, options) for r in RECIPES if options.include_slow or not r.slow]


def exit_code(reports: list[Report]) -> int:
    return 0 if all(r.status != FAIL for r in reports) else 1


__all__ = [
    "Check", "FAIL", "FIXTURES_ENV", "to_plain", "MissingFixture", "Options", "PASS", "PENDING", "RECIPES", "Recipe",
    "Report", "exit_code", "get_recipe", "recipe_ids", "resolve_fixture", "run", "verify_all",
]
