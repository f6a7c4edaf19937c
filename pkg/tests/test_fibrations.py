from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from godeaux.fibrations import (FibrationConfig, brute_force_configs, canonical_multiple, case_labels,
                                correspondence_report, enumerate_configs, godeaux_filter, k_two_divisible,
                                lambda_lcm, orbifold_h1, rows_with_h1)

EXPECTED = {"(4,4;4)", "(3,3;6)", "(2,6;6)", "(2,4;8)", "(2,3;12)", "(2,2,2;4)", "(2,2,2,2;2)"}


def test_seven_configurations():
    configs = enumerate_configs(4)
    assert {str(c) for c in configs} == EXPECTED and len(configs) == 7


def test_sorted_by_length_then_multiplicities():
    configs = enumerate_configs(4)
    keys = [(c.r, c.multiplicities, c.n) for c in configs]
    assert keys == sorted(keys)


def test_more_fibers_allowed_changes_nothing():
    assert enumerate_configs(10) == enumerate_configs(4)
    assert [str(c) for c in enumerate_configs(2)] == ["(2,3;12)", "(2,4;8)", "(2,6;6)", "(3,3;6)", "(4,4;4)"]


def test_rejects_max_fibers_below_two():
    with pytest.raises(ValueError):
        enumerate_configs(1)


def test_exhaustive_against_box_search():
    assert brute_force_configs(12, 24) == enumerate_configs(4)


def test_every_config_satisfies_equation():
    for c in enumerate_configs(4):
        assert sum(1 - Fraction(1, m) for m in c.multiplicities) == 1 + Fraction(2, c.n)
        assert all(c.n % m == 0 for m in c.multiplicities)
        assert c.lam > 0 and c.lam * c.n == 2


def test_config_validation():
    with pytest.raises(ValueError):
        FibrationConfig((4, 4), 8)
    with pytest.raises(ValueError):
        FibrationConfig((1, 4), 4)
    with pytest.raises(ValueError):
        FibrationConfig((3, 4), 12)


def test_lambda_examples():
    assert canonical_multiple(FibrationConfig((4, 4), 4)) == Fraction(1, 2)
    assert canonical_multiple(FibrationConfig((2, 3), 12)) == Fraction(1, 6)


@pytest.mark.parametrize("ms,expected", [
    ((4, 4), "Z/4"), ((3, 3), "Z/3"), ((2, 6), "Z/2"), ((2, 4), "Z/2"), ((2, 3), "0"),
    ((2, 2, 2), "Z/2 + Z/2"), ((2, 2, 2, 2), "Z/2 + Z/2 + Z/2"),
])
def test_orbifold_h1(ms, expected):
    assert str(orbifold_h1(ms)) == expected


@given(st.integers(2, 40), st.integers(2, 40))
def test_two_fiber_h1_is_gcd(a, b):
    g = orbifold_h1((a, b))
    assert g.free_rank == 0 and g.order == gcd(a, b)


@given(st.lists(st.integers(2, 12), min_size=1, max_size=5))
def test_h1_order_formula(ms):
    # order = prod(m_i) / lcm(m_i) for the relation sum g_i = 0 when r >= 2
    g = orbifold_h1(ms)
    from math import lcm, prod
    assert g.free_rank == 0
    assert g.order == prod(ms) // lcm(*ms)


def test_orbifold_h1_rejects_small():
    with pytest.raises(ValueError):
        orbifold_h1((1, 3))


def test_filter_keeps_five_two_fiber_cases():
    kept = godeaux_filter(enumerate_configs(4))
    assert {str(f.config) for f in kept} == EXPECTED - {"(2,2,2;4)", "(2,2,2,2;2)"}
    adm = {str(f.config): [(a.order, a.kernel) for a in f.admissible] for f in kept}
    assert adm["(4,4;4)"] == [(4, 1)]
    assert adm["(2,3;12)"] == [(1, 1), (2, 2)]
    assert adm["(3,3;6)"] == [(3, 1)]


def test_case_letters():
    labels = case_labels(enumerate_configs(4))
    assert {str(c): v for c, v in labels.items()} == {
        "(4,4;4)": "a", "(3,3;6)": "b", "(2,6;6)": "c", "(2,4;8)": "d", "(2,3;12)": "e",
        "(2,2,2;4)": "f", "(2,2,2,2;2)": "g"}


def test_two_divisibility():
    div = {str(c): (k_two_divisible(c), lambda_lcm(c)) for c in enumerate_configs(2)}
    assert div == {"(4,4;4)": (True, 2), "(2,6;6)": (True, 2), "(3,3;6)": (False, 1),
                   "(2,4;8)": (False, 1), "(2,3;12)": (False, 1)}


def test_divisibility_criterion_needs_two_fibers():
    with pytest.raises(ValueError, match="criterion stated for two multiple fibers"):
        k_two_divisible(FibrationConfig((2, 2, 2), 4))


def test_divisibility_independent_of_n():
    # lambda * n = 2 pins n, so recomputing lambda from (m1, m2) alone agrees
    for c in enumerate_configs(2):
        m1, m2 = c.multiplicities
        lam = -1 + Fraction(m1 - 1, m1) + Fraction(m2 - 1, m2)
        from math import lcm
        v = lam * lcm(m1, m2)
        assert k_two_divisible(c) == (v.denominator == 1 and v.numerator % 2 == 0)


def test_correspondence_report():
    raw = enumerate_configs(4)
    rows = correspondence_report(godeaux_filter(raw), case_labels(raw))
    a = [r for r in rows if r.case == "a"]
    assert len(a) == 1 and a[0].h1_y == 4
    assert a[0].verdict == "produces exceptional bundle with c1 = K+sigma"
    b = [r for r in rows if r.case == "b"][0]
    assert b.verdict == "no c1 = K bundle from this boundary"
    assert rows_with_h1(rows, 5) == []
    assert all(r.note for r in rows if r.case == "c")
    assert not any(r.note for r in rows if r.case != "c")
    kernel_rows = [r for r in rows if r.relation == "kernel Z/2"]
    assert kernel_rows and all(r.h1_y % 2 == 0 for r in kernel_rows)
