import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from godeaux.fields import QQ, CyclotomicField, FieldError, PrimeField
from godeaux.wps import Ambient, Polynomial, parse
from godeaux.wps.fermat import (deforms, fermat, fifth_roots_of_minus_one, invariant_quintic_monomials,
                                lines_on_fermat_quintic, quartic_cofactors, quintic_ambient,
                                random_invariant_quintic)
from godeaux.wps.membership import DegreeError, graded_membership

AMB = Ambient(("x", "y", "z", "w"))


def random_form(amb, fld, degree, rng, density=0.6):
    return Polynomial(amb, fld, {e: fld.from_int(rng.randint(-5, 5)) for e in amb.monomials(degree)
                                 if rng.random() < density})


def test_multiple_of_single_generator():
    x = parse("x", AMB)
    q = parse("y^2 - 3*z*w + x*z", AMB)
    res = graded_membership(x * q, [x], 3)
    assert res and res.certificate == (q,)
    assert not graded_membership(parse("y^3", AMB), [x], 3)


@settings(max_examples=40)
@given(st.integers(0, 2 ** 32), st.sampled_from(["qq", "f13"]))
def test_certificates_resubstitute(seed, domain):
    rng = random.Random(seed)
    fld = QQ if domain == "qq" else PrimeField(13)
    amb = AMB
    gens = [random_form(amb, fld, rng.randint(1, 2), rng) for _ in range(rng.randint(1, 3))]
    gens = [g for g in gens if not g.is_zero()] or [Polynomial.variable(amb, 0, fld)]
    d = 3
    g = Polynomial.zero(amb, fld)
    for gen in gens:
        g = g + random_form(amb, fld, d - gen.quasi_degree(), rng) * gen
    for method in ("auto", "dense"):
        res = graded_membership(g, gens, d, method=method)
        assert res
        assert res.combine(gens) == g


@settings(max_examples=30)
@given(st.integers(0, 2 ** 32))
def test_auto_and_dense_agree(seed):
    rng = random.Random(seed)
    fld = PrimeField(11)
    gens = [random_form(AMB, fld, 1, rng, 0.5)] + [random_form(AMB, fld, 2, rng, 0.3) for _ in range(2)]
    gens = [g for g in gens if not g.is_zero()] or [Polynomial.variable(AMB, 1, fld)]
    g = random_form(AMB, fld, 3, rng, 0.4)
    assert bool(graded_membership(g, gens, 3)) == bool(graded_membership(g, gens, 3, method="dense"))


def test_weighted_membership():
    amb = Ambient(("x", "y", "t"), (1, 1, 2))
    t, x = parse("t", amb), parse("x", amb)
    g = parse("t^2 + x^2*t - y^4 + x*y^3", amb)
    assert not graded_membership(g, [t, x], 4)
    assert graded_membership(g + parse("y^4", amb) - parse("x*y^3", amb), [t, x], 4)
    assert graded_membership(parse("y^4 - x*y^3", amb), [x, parse("y^4", amb)], 4)


def test_degree_errors():
    x, y = parse("x", AMB), parse("y", AMB)
    with pytest.raises(DegreeError):
        graded_membership(parse("x^2", AMB), [x], 3)
    with pytest.raises(DegreeError):
        graded_membership(parse("x^2 + y", AMB), [x], 2)
    with pytest.raises(DegreeError):
        graded_membership(parse("x^2", AMB), [x + y * y], 2)
    with pytest.raises(DegreeError):
        graded_membership(parse("x^2", AMB), [], 2)
    with pytest.raises(DegreeError):
        graded_membership(parse("x", AMB, PrimeField(7)), [x], 1)
    with pytest.raises(ValueError):
        graded_membership(x, [x], 1, method="groebner")


def test_zero_target_is_member():
    x = parse("x", AMB)
    res = graded_membership(Polynomial.zero(AMB), [x], 4)
    assert res and res.combine([x]).is_zero()


@pytest.mark.parametrize("fld", [PrimeField(11), PrimeField(31), CyclotomicField(5)], ids=str)
def test_fermat_lines(fld):
    lines = lines_on_fermat_quintic(fld)
    assert len(lines) == 75
    F = fermat(quintic_ambient(), fld)
    for line in lines:
        A, B = quartic_cofactors(line)
        assert A * line.X + B * line.Y == F
    assert len({(str(l.X), str(l.Y)) for l in lines}) == 75


def test_fermat_contains_normalized_line():
    fld = CyclotomicField(5)
    lines = lines_on_fermat_quintic(fld)
    x = [Polynomial.variable(quintic_ambient(), i, fld) for i in range(4)]
    minus_one = fld.neg(fld.one)
    assert any(l.X == x[0] + x[1] and l.Y == x[2] + x[3] for l in lines)
    assert all(fld.pow(r, 5) == minus_one for r in fifth_roots_of_minus_one(fld))


def test_fermat_needs_tenth_roots():
    with pytest.raises(FieldError, match="10"):
        lines_on_fermat_quintic(PrimeField(13))


def test_invariant_quintics():
    mons = invariant_quintic_monomials()
    amb = quintic_ambient()
    assert all(amb.character(e) == 0 and sum(e) == 5 for e in mons)
    assert len(mons) == 12
    G = random_invariant_quintic(QQ, random.Random(1))
    assert G.character_weight() == 0 and G.quasi_degree() == 5


def test_positive_control_deforms():
    fld = CyclotomicField(5)
    line = lines_on_fermat_quintic(fld)[7]
    A, B = quartic_cofactors(line)
    G = A * line.Y + B * line.X + line.X * line.X * line.Y * line.Y * line.X
    res = deforms(line, G)
    assert res and res.combine([line.X, line.Y, A, B]) == G


def test_generic_invariant_quintic_moves_every_line_over_f11():
    # the same check as the exact one, but over F_11 where it is fast
    fld = PrimeField(11)
    G = random_invariant_quintic(fld, random.Random(3))
    assert not any(deforms(line, G) for line in lines_on_fermat_quintic(fld))
