"""``godeaux`` command line."""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import recipes
from .fields import FieldError, make_field


class CLIError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "structured":
        print(json.dumps(recipes.to_plain(payload), indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def _options(args) -> recipes.Options:
    return recipes.Options(threads=args.threads, fixtures_dir=args.fixtures_dir,
                           include_slow=not getattr(args, "skip_slow", False))


def _fixture(name: str, args) -> Path:
    """A path as given, else a file in the fixtures directory."""
    path = Path(name)
    if path.is_file():
        return path
    try:
        return recipes.resolve_fixture(name, _options(args))
    except recipes.MissingFixture as exc:
        raise CLIError(str(exc)) from None


def _labels(text: str) -> list[str]:
    return [t for t in text.replace(",", " ").split() if t]


# fibrations ------------------------------------------------------------------

def cmd_fibrations(args) -> int:
    from .fibrations import case_labels, correspondence_report, enumerate_configs, godeaux_filter, orbifold_h1

    raw = enumerate_configs(args.max_fibers)
    labels = case_labels(raw)
    raw = sorted(raw, key=labels.get)
    kept = godeaux_filter(raw)
    rows = correspondence_report(sorted(kept, key=lambda f: labels[f.config]), labels)
    configs = [{"case": labels[c], "config": str(c), "multiplicities": list(c.multiplicities), "n": c.n,
                "lambda": c.lam, "H1": str(orbifold_h1(c.multiplicities)),
                "admissible": [a.order for f in kept if f.config == c for a in f.admissible]} for c in raw]
    table = [{"case": r.case, "config": str(r.config), "H1(Y)": f"Z/{r.h1_y}", "relation": r.relation,
              "lambda*lcm": r.lam_lcm, "2-divisible": r.two_divisible, "verdict": r.verdict, "note": r.note}
             for r in rows]
    lines = ["case  config        lambda  H1(X)              admissible |H1(Y)|"]
    for c in configs:
        adm = ",".join(map(str, c["admissible"])) or "-"
        lines.append(f"{c['case']:<5} {c['config']:<13} {str(c['lambda']):<7} {c['H1']:<18} {adm}")
    lines.append("")
    lines.append("case  H1(Y)  relation        lambda*lcm  2-div  verdict")
    for t in table:
        note = f"  [{t['note']}]" if t["note"] else ""
        lines.append(f"{t['case']:<5} {t['H1(Y)']:<6} {t['relation']:<15} {str(t['lambda*lcm']):<11} "
                     f"{str(t['2-divisible']).lower():<6} {t['verdict']}{note}")
    z5 = [t for t in table if t["H1(Y)"] == "Z/5"]
    lines.append(f"rows with H1(Y) = Z/5: {len(z5)}")
    _emit(args, {"configurations": configs, "correspondence": table}, "\n".join(lines))
    return 0


# orbits ----------------------------------------------------------------------

def cmd_orbits(args) -> int:
    from .weyl import orbit_table, orbits_mod2, qmod4_is

    keep = None if args.qmod4 == "all" else qmod4_is(int(args.qmod4))
    shuffle = random.Random(args.seed) if args.seed is not None else None
    table = orbit_table(orbits_mod2(keep, shuffle=shuffle))
    payload = {"qmod4": args.qmod4, "orbits": [{"representative": r.representative, "size": r.size,
                                                 "qmod4": r.qmod4} for r in table]}
    text = "\n".join([f"{len(table)} orbit(s) on B/2B (v^2 mod 4: {args.qmod4})"] +
                     [f"  {r.representative:<24} size {r.size:<4} v^2 = {r.qmod4} mod 4" for r in table])
    _emit(args, payload, text)
    return 0


# lattice ---------------------------------------------------------------------

def _lattice_vector(text: str, L):
    """Parse ``C1 + C11 - 2*S2`` into integer coordinates."""
    from .fields import QQ
    from .wps.parser import ParseError, parse
    from .wps.poly import Ambient

    amb = Ambient(L.labels)
    try:
        p = parse(text, amb, QQ)
    except ParseError as exc:
        raise CLIError(str(exc)) from None
    v = [0] * L.rank
    for e, c in p.items():
        if sum(e) != 1 or Fraction(c).denominator != 1:
            raise CLIError(f"{text!r} is not an integer combination of basis labels")
        v[e.index(1)] = int(c)
    return tuple(v)


def cmd_lattice(args) -> int:
    from .lattice import (INFINITE, is_divisible_mod, load_gram, mod2_quotient, quotient_group, solve_in_span,
                          sublattice_index)

    L = load_gram(_fixture(args.gram, args))
    payload: dict = {"rank": L.rank, "labels": list(L.labels), "det": L.det()}
    lines = [f"rank {L.rank}, det {L.det()}"]
    if args.klp:
        from .klp import analyse

        r = analyse(L)
        payload["klp"] = {"form_rank": r.rank, "det_A": r.det_A, "index_L_A": r.index_L_A,
                          "index_N_A": r.index_N_A, "index_L_N": r.index_L_N, "x_matches": r.x_matches,
                          "x_particular": list(r.x.particular), "x_kernel": [list(k) for k in r.x.kernel],
                          "k_two_divisible": r.k_two_divisible, "mod2_dimension": r.mod2_dimension,
                          "k_image": list(r.k_image), "k_congruent_c1_c6": r.k_congruent_c1_c6}
        lines += [f"|L/A| = {r.index_L_A}, |N/A| = {r.index_N_A}, |L/N| = {r.index_L_N}",
                  f"S1 - S2 family matches: {r.x_matches}",
                  f"K 2-divisible modulo M: {r.k_two_divisible}",
                  f"L/(2L+M) has dimension {r.mod2_dimension}; K maps to {r.k_image}"]
    if args.sublattice:
        gens = [L.basis_vector(lab) for lab in _labels(args.sublattice)]
        idx = sublattice_index(L, gens)
        grp = quotient_group(L, gens)
        payload["index"] = "infinite" if idx is INFINITE else idx
        payload["quotient"] = str(grp)
        lines.append(f"index {payload['index']}, quotient {grp}")
    if args.solve:
        span = _labels(args.span) if args.span else list(L.labels)
        sol = solve_in_span(_lattice_vector(args.solve, L), [L.basis_vector(s) for s in span], L)
        payload["solve"] = None if sol is None else {"span": span, "particular": list(sol.particular),
                                                       "kernel": [list(k) for k in sol.kernel]}
        lines.append("no solution" if sol is None else
                     f"x = {[str(x) for x in sol.particular]} + span {[[str(x) for x in k] for k in sol.kernel]}")
    if args.divisible:
        v = _lattice_vector(args.divisible, L)
        M = [L.basis_vector(s) for s in _labels(args.modulo or "")]
        ok = is_divisible_mod(v, args.k, L, M)
        payload["divisible"] = ok
        lines.append(f"{args.divisible} in {args.k}L + M: {ok}")
        if args.k == 2:
            q = mod2_quotient(L, M)
            payload["mod2_dimension"] = q.dimension
            payload["mod2_image"] = list(q.image(v))
            lines.append(f"L/(2L+M) has dimension {q.dimension}; image {q.image(v)}")
    _emit(args, payload, "\n".join(lines))
    return 0


# invariants ------------------------------------------------------------------

def cmd_invariants(args) -> int:
    from .invariants import (BundleNumerics, DivisorNumerics, chi_line, genus_adjunction, hj_expand, is_wahl,
                             ksq_drop_check)

    payload: dict = {}
    lines = []
    if args.bundle:
        n, c1sq = args.bundle
        c1K = args.c1K if args.c1K is not None else c1sq
        b = BundleNumerics.exceptional(n, c1sq, c1K)
        payload["bundle"] = {"n": n, "c1sq": c1sq, "c1K": c1K, "c2": b.c2, "chi_end": b.chi_end,
                             "slope_K": b.slope_K, "verdict": b.verdict}
        lines.append(f"rank {n}, c1^2 = {c1sq}, c1.K = {c1K}: c2 = {b.c2}, chi(End) = {b.chi_end}, "
                     f"slope {b.slope_K}; {b.verdict}")
    if args.divisor:
        D = DivisorNumerics(*args.divisor)
        payload["divisor"] = {"Dsq": D.Dsq, "DK": D.DK, "chi": chi_line(D), "p_a": genus_adjunction(D)}
        lines.append(f"D^2 = {D.Dsq}, D.K = {D.DK}: chi(O(D)) = {chi_line(D)}, p_a = {genus_adjunction(D)}")
    if args.chain:
        N, q = args.chain
        c = hj_expand(N, q)
        w = is_wahl(N, q)
        ksq = ksq_drop_check(c, args.ksq)
        payload["chain"] = {"N": N, "q": q, "selfints": list(c.selfints), "discrepancies": list(c.discrepancies),
                            "wahl": None if w is None else [w.n, w.a], "K_resolution_sq": ksq}
        lines.append(f"1/{N}(1,{q}): chain {c}, discrepancies {[str(d) for d in c.discrepancies]}, "
                     f"Wahl {'no' if w is None else f'n={w.n}, a={w.a}'}, K~^2 = {ksq} (K^2 = {args.ksq})")
    if not lines:
        raise CLIError("give at least one of --bundle, --divisor, --chain")
    _emit(args, payload, "\n".join(lines))
    return 0


# weighted projective scans ---------------------------------------------------

def _system_and_field(args):
    from .wps.system import load_system

    system = load_system(_fixture(args.system, args))
    try:
        fld = system.field(args.prime, args.extension) if args.prime else system.field()
    except FieldError as exc:
        raise CLIError(str(exc)) from None
    if fld.characteristic == 0:
        raise CLIError("scanning needs a finite field: pass --prime")
    return system, fld


def cmd_wps_scan(args) -> int:
    from .wps.scan import scan_cone_singular, stratum_transverse

    system, fld = _system_and_field(args)
    eqs = system.equations_over(fld)
    rank = args.expected_rank if args.expected_rank is not None else system.expected_rank
    if rank is None:
        raise CLIError("no expected rank: pass --expected-rank")
    sing = scan_cone_singular(eqs, fld, rank, threads=args.threads, required_roots=system.roots,
                              allow_small_characteristic=args.allow_small_characteristic)
    payload = {"system": system.name, "field": str(fld), "expected_rank": rank,
               "singular": [p.as_dict(fld) for p in sing]}
    lines = [f"{system.name} over {fld}: {len(sing)} singular or quotient point(s)"]
    lines += [f"  {p.format(fld)}  stabilizer {p.stabilizer_order}  jacobian rank {p.jacobian_rank}" for p in sing]
    stratum = _labels(args.stratum) if args.stratum else list(system.stratum)
    if stratum:
        rep = stratum_transverse(eqs, stratum, fld, threads=args.threads, required_roots=system.roots,
                                 allow_small_characteristic=args.allow_small_characteristic)
        payload["stratum"] = {"variables": stratum, "count": rep.count, "verdict": rep.verdict,
                              "points": [p.as_dict(fld) for p in rep.points]}
        lines.append(f"stratum {' = '.join(stratum)} = 0: {rep.count} point(s), {rep.verdict}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_base_locus(args) -> int:
    from .wps.scan import base_locus, simple_point

    system, fld = _system_and_field(args)
    eqs, secs = system.equations_over(fld), system.sections_over(fld)
    if not secs:
        raise CLIError(f"{system.name} declares no [sections]")
    rep = base_locus(secs, eqs, fld, threads=args.threads, required_roots=system.roots,
                     allow_small_characteristic=args.allow_small_characteristic)
    simple = [simple_point(secs, eqs, p.coords, fld) for p in rep.points]
    payload = {"system": system.name, "field": str(fld), "points": [p.as_dict(fld) for p in rep.points],
               "simple": simple, "orbits": [list(o) for o in rep.orbits]}
    lines = [f"{system.name} over {fld}: {rep.point_count} base point(s) in {rep.orbit_count} orbit(s)"]
    for k, orb in enumerate(rep.orbits):
        lines.append(f"  orbit {k + 1}: " + ", ".join(rep.points[i].format(fld) for i in orb))
    lines.append(f"all simple: {all(simple)}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_membership(args) -> int:
    from .wps.membership import DegreeError, graded_membership
    from .wps.parser import ParseError, parse
    from .wps.poly import Ambient

    variables = _labels(args.variables)
    weights = [int(w) for w in _labels(args.weights)] if args.weights else None
    amb = Ambient(variables, weights)
    fld = make_field(args.prime, args.extension)
    try:
        target = parse(args.target, amb, fld)
        gens = [parse(g, amb, fld) for g in args.generators]
        res = graded_membership(target, gens, args.degree, method=args.method)
    except (ParseError, DegreeError) as exc:
        raise CLIError(str(exc)) from None
    cert = None if not res else [str(h) for h in res.certificate]
    _emit(args, {"member": res.member, "certificate": cert, "field": str(fld), "degree": args.degree},
          f"member: {res.member}" + ("" if not res else "\n" + "\n".join(
              f"  h{j + 1} = {h}" for j, h in enumerate(cert))))
    return 0


def cmd_fermat_lines(args) -> int:
    from .fields import CyclotomicField
    from .wps.fermat import deforms, lines_on_fermat_quintic, random_invariant_quintic

    fld = make_field(args.prime) if args.prime else CyclotomicField(5)
    try:
        lines = lines_on_fermat_quintic(fld)
    except FieldError as exc:
        raise CLIError(str(exc)) from None
    rng = random.Random(args.seed)
    Gs = [random_invariant_quintic(fld, rng) for _ in range(args.random)]
    deforming = [[bool(deforms(line, G)) for line in lines] for G in Gs]
    payload = {"field": str(fld), "lines": [line.describe() for line in lines],
               "deforming_per_quintic": [sum(d) for d in deforming], "seed": args.seed}
    text = [f"{len(lines)} lines over {fld}"]
    if args.verbose:
        text += [f"  {line.describe()}" for line in lines]
    for k, d in enumerate(deforming):
        text.append(f"random invariant quintic {k + 1}: {sum(d)} line(s) deform")
    _emit(args, payload, "\n".join(text))
    return 0


# verify-all ------------------------------------------------------------------

def cmd_verify_all(args) -> int:
    options = _options(args)
    if args.recipe:
        try:
            selected = [recipes.get_recipe(r) for r in args.recipe]
        except KeyError as exc:
            raise CLIError(exc.args[0]) from None
        reports = [recipes.run(r, options) for r in selected]
    else:
        reports = recipes.verify_all(options)
    code = recipes.exit_code(reports)
    payload = {"reports": [r.as_dict(args.timings) for r in reports], "exit_code": code}
    lines = []
    for r in reports:
        suffix = f"  {r.seconds:.2f}s" if args.timings else ""
        lines.append(f"{r.status:<16} {r.recipe:<18} {r.statement}{suffix}")
        if r.message:
            lines.append(f"    {r.message}")
        for c in r.checks:
            if not c.ok:
                lines.append(f"    mismatch [{c.provenance}] {c.name}: expected {c.expected!r}, got {c.actual!r}")
    counts = {s: sum(r.status == s for r in reports) for s in (recipes.PASS, recipes.FAIL, recipes.PENDING)}
    lines.append(f"{counts['pass']} pass, {counts['fail']} fail, {counts['pending-fixture']} pending")
    _emit(args, payload, "\n".join(lines))
    return code


def build_parser() -> argparse.ArgumentParser:
    def global_flags(suppress: bool) -> argparse.ArgumentParser:
        # subcommands repeat the flags without defaults so they do not clobber earlier values
        g = argparse.ArgumentParser(add_help=False)
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g.add_argument("--format", choices=("text", "structured"), default=d("text"))
        g.add_argument("--threads", type=int, default=d(1))
        g.add_argument("--fixtures-dir", type=Path, default=d(None),
                       help=f"fixture directory (default: ${recipes.FIXTURES_ENV}, else packaged data)")
        return g

    common = global_flags(True)
    p = argparse.ArgumentParser(prog="godeaux", parents=[global_flags(False)],
                                description="Exact checks for Godeaux degenerations and exceptional bundles.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("fibrations", parents=[common], help="multiple-fiber configurations")
    s.add_argument("--max-fibers", type=int, default=4)
    s.set_defaults(func=cmd_fibrations)

    s = sub.add_parser("orbits", parents=[common], help="W(E8) orbits on B/2B")
    s.add_argument("--qmod4", choices=("0", "1", "2", "3", "all"), default="1")
    s.add_argument("--seed", type=int, default=None, help="shuffle generators and seeds")
    s.set_defaults(func=cmd_orbits)

    s = sub.add_parser("lattice", parents=[common], help="index, solving and divisibility on a Gram fixture")
    s.add_argument("gram", help="Gram file path or fixture name")
    s.add_argument("--sublattice", help="labels spanning a sublattice")
    s.add_argument("--solve", help="vector such as 'S1 - S2'")
    s.add_argument("--span", help="labels to solve against (default all)")
    s.add_argument("--divisible", help="vector such as 'C1 + C11'")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--modulo", help="labels of M")
    s.add_argument("--klp", action="store_true", help="run the KLP fiber analysis")
    s.set_defaults(func=cmd_lattice)

    s = sub.add_parser("invariants", parents=[common], help="bundle, divisor and singularity numerics")
    s.add_argument("--bundle", type=int, nargs=2, metavar=("N", "C1SQ"))
    s.add_argument("--c1K", type=int, default=None)
    s.add_argument("--divisor", type=int, nargs=2, metavar=("DSQ", "DK"))
    s.add_argument("--chain", type=int, nargs=2, metavar=("N", "Q"))
    s.add_argument("--ksq", type=Fraction, default=Fraction(1), help="K^2 of the singular surface")
    s.set_defaults(func=cmd_invariants)

    for name, func, helptext in (("wps-scan", cmd_wps_scan, "singular points of a weighted system"),
                                 ("base-locus", cmd_base_locus, "base locus of the [sections]")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("system", help=".sys path or fixture name")
        s.add_argument("--prime", type=int)
        s.add_argument("--extension", help="irreducible modulus in z, e.g. 'z^2+1'")
        s.add_argument("--allow-small-characteristic", action="store_true")
        if name == "wps-scan":
            s.add_argument("--expected-rank", type=int)
            s.add_argument("--stratum", help="variables set to zero, e.g. 'u0,u1'")
        s.set_defaults(func=func)

    s = sub.add_parser("membership", parents=[common], help="graded ideal membership with certificate")
    s.add_argument("--variables", required=True)
    s.add_argument("--weights")
    s.add_argument("--prime", type=int)
    s.add_argument("--extension")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--method", choices=("auto", "dense"), default="auto")
    s.add_argument("target")
    s.add_argument("generators", nargs="+")
    s.set_defaults(func=cmd_membership)

    s = sub.add_parser("fermat-lines", parents=[common], help="lines on the Fermat quintic")
    s.add_argument("--prime", type=int, help="work over F_p instead of Q(zeta5)")
    s.add_argument("--random", type=int, default=3, help="random invariant quintics to test")
    s.add_argument("--seed", type=int, default=recipes.FERMAT_SEED)
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(func=cmd_fermat_lines)

    s = sub.add_parser("verify-all", parents=[common], help="run every recipe")
    s.add_argument("--recipe", action="append", help="run only this recipe (repeatable)")
    s.add_argument("--skip-slow", action="store_true")
    s.add_argument("--timings", action="store_true", help="include wall time")
    s.set_defaults(func=cmd_verify_all)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"godeaux: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FieldError) as exc:
        print(f"godeaux: {exc}", file=sys.stderr)
        return 2
