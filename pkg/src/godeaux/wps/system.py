"""Polynomial system fixtures.

A fixture is an INI file::

    [header]
    variables = u0 u1 v0 y1 y3
    weights = 1 1 4 4 4
    group_order = 4
    characters = 0 1 2 3 1
    prime = 17
    roots = 8
    expected_rank = 2
    stratum = u0 u1

    [definitions]       # optional, evaluated in order
    [equations]         # name = expression
    [sections]          # optional

Expressions are parsed over the rationals and moved into the scan field on
demand, so the same fixture can be scanned at several primes.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from ..fields import QQ, Field, make_field
from .parser import ParseError, parse
from .poly import Ambient, Inhomogeneous, Polynomial


class SystemFormatError(ValueError):
    pass


@dataclass(frozen=True)
class PolynomialSystem:
    name: str
    ambient: Ambient
    equations: dict[str, Polynomial]
    sections: dict[str, Polynomial] = field(default_factory=dict)
    definitions: dict[str, Polynomial] = field(default_factory=dict)
    prime: int | None = None
    extension: str | None = None
    roots: int | None = None
    expected_rank: int | None = None
    stratum: tuple[str, ...] = ()
    description: str = ""

    def field(self, prime: int | None = None, extension: str | None = None) -> Field:
        p = prime if prime is not None else self.prime
        ext = extension if prime is not None else self.extension
        if p is None:
            return QQ
        return make_field(p, ext or None)

    def equations_over(self, fld: Field) -> list[Polynomial]:
        return [p.map_coefficients(fld) if fld != QQ else p for p in self.equations.values()]

    def sections_over(self, fld: Field) -> list[Polynomial]:
        return [p.map_coefficients(fld) if fld != QQ else p for p in self.sections.values()]

    def stratum_indices(self) -> tuple[int, ...]:
        return tuple(self.ambient.index(v) for v in self.stratum)


def _ints(text: str, key: str, source: str) -> list[int]:
    try:
        return [int(t) for t in text.split()]
    except ValueError:
        raise SystemFormatError(f"{source}: [header] {key} must be integers") from None


def parse_system(text: str, source: str = "<string>", name: str | None = None) -> PolynomialSystem:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), comment_prefixes=("#",),
                                   interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise SystemFormatError(f"{source}: {exc}") from None
    if "header" not in cp:
        raise SystemFormatError(f"{source}: missing [header]")
    if "equations" not in cp:
        raise SystemFormatError(f"{source}: missing [equations]")
    h = cp["header"]
    if "variables" not in h:
        raise SystemFormatError(f"{source}: [header] needs 'variables'")
    variables = h["variables"].split()
    weights = _ints(h.get("weights", " ".join("1" * len(variables))), "weights", source)
    k = _ints(h.get("group_order", "1"), "group_order", source)
    if len(k) != 1:
        raise SystemFormatError(f"{source}: [header] group_order must be a single integer")
    k = k[0]
    chars = _ints(h.get("characters", " ".join("0" * len(variables))), "characters", source)
    try:
        amb = Ambient(variables, weights, k, chars)
    except ValueError as exc:
        raise SystemFormatError(f"{source}: {exc}") from None

    defs: dict[str, Polynomial] = {}

    def read(section: str) -> dict[str, Polynomial]:
        out = {}
        if section not in cp:
            return out
        for key, expr in cp[section].items():
            try:
                out[key] = parse(expr, amb, QQ, defs)
            except ParseError as exc:
                raise SystemFormatError(f"{source}: [{section}] {key}: {exc}") from None
            if section == "definitions":
                defs[key] = out[key]
                continue
            # the scanner dedupes by the weighted scalar action and the base
            # locus is grouped into orbits, so both gradings must be respected
            for verdict in (out[key].quasi_degree(), amb.group_order > 1 and out[key].character_weight()):
                if isinstance(verdict, Inhomogeneous):
                    raise SystemFormatError(f"{source}: [{section}] {key}: {verdict}")
        return out

    read("definitions")
    equations = read("equations")
    sections = read("sections")
    stratum = tuple(h.get("stratum", "").split())
    for v in stratum:
        if v not in variables:
            raise SystemFormatError(f"{source}: stratum variable {v!r} is not declared")

    def opt_int(key):
        if key not in h or not h[key].strip():
            return None
        try:
            return int(h[key])
        except ValueError:
            raise SystemFormatError(f"{source}: [header] {key} must be an integer, got {h[key]!r}") from None

    return PolynomialSystem(
        name=name or h.get("name", Path(source).stem),
        ambient=amb,
        equations=equations,
        sections=sections,
        definitions=defs,
        prime=opt_int("prime"),
        extension=h.get("extension") or None,
        roots=opt_int("roots"),
        expected_rank=opt_int("expected_rank"),
        stratum=stratum,
        description=h.get("description", ""),
    )


def load_system(path) -> PolynomialSystem:
    path = Path(path)
    return parse_system(path.read_text(encoding="utf-8"), str(path), path.stem)


__all__ = ["PolynomialSystem", "SystemFormatError", "load_system", "parse_system"]
