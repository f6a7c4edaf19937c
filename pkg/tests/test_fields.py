import pytest
from hypothesis import given
from hypothesis import strategies as st

from godeaux.fields import QQ, CyclotomicField, ExtensionField, FieldError, PrimeField, make_field, parse_modulus

GF9 = ExtensionField(3, parse_modulus("z^2 + 1", 3))


@pytest.mark.parametrize("fld", [PrimeField(13), GF9])
def test_finite_field_axioms(fld):
    els = list(fld.elements())
    assert len(els) == fld.order
    for a in els:
        assert fld.add(a, fld.neg(a)) == fld.zero
        if a != fld.zero:
            assert fld.mul(a, fld.inv(a)) == fld.one
            assert fld.pow(a, fld.order - 1) == fld.one


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_gf9_distributive(a, b, c):
    f = GF9
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


def test_roots_of_unity():
    F17 = PrimeField(17)
    z = F17.primitive_root_of_unity(8)
    assert F17.pow(z, 8) == 1 and F17.pow(z, 4) != 1
    with pytest.raises(FieldError, match=r"need q ≡ 1 \(mod 8\), but q = 13"):
        PrimeField(13).primitive_root_of_unity(8)
    assert GF9.pow(GF9.primitive_root_of_unity(8), 4) != GF9.one


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        ExtensionField(5, parse_modulus("z^2 + 1", 5))  # -1 is a square mod 5


def test_non_prime_rejected():
    with pytest.raises(FieldError):
        PrimeField(15)


def test_rationals_stay_exact():
    from fractions import Fraction
    assert QQ.inv(3) == Fraction(1, 3)
    assert isinstance(QQ.mul(2, 3), Fraction)


def test_cyclotomic_five():
    K = CyclotomicField(5)
    z = K.primitive_root_of_unity(5)
    assert K.pow(z, 5) == K.one and z != K.one
    assert len(K.roots_of_unity(10)) == 10


def test_make_field():
    assert make_field() == QQ
    assert make_field(7) == PrimeField(7)
    assert make_field(3, "z^2+1").order == 9
