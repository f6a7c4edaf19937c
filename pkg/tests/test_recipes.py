import json

import pytest

from godeaux import recipes
from godeaux.recipes import (FAIL, PASS, PENDING, Check, Options, Report, exit_code, get_recipe, recipe_ids,
                             run, to_plain, verify_all)


def test_ids_unique_and_lookup():
    ids = recipe_ids()
    assert len(ids) == len(set(ids))
    assert get_recipe("prop-p4").id == "prop-p4[p=17]"
    assert get_recipe("prop-p4[p=41]").id == "prop-p4[p=41]"
    with pytest.raises(KeyError):
        get_recipe("nope")


def test_every_recipe_passes():
    reports = verify_all(Options())
    assert {r.recipe: r.status for r in reports} == {i: PASS for i in recipe_ids()}
    assert exit_code(reports) == 0
    for r in reports:
        assert r.checks and all(c.provenance in recipes.PROVENANCES for c in r.checks)
        json.dumps(r.as_dict())


def test_skip_slow():
    ids = [r.recipe for r in verify_all(Options(include_slow=False))]
    assert not any(i.startswith("prop-p3") for i in ids)


def test_missing_fixture_is_pending(tmp_path):
    for rid in ("prop-d-2div", "prop-p4[p=17]", "base-locus[p=73]", "prop-p3[p=11]"):
        rep = run(rid, Options(fixtures_dir=tmp_path))
        assert rep.status == PENDING and "not found" in rep.message
    assert exit_code([run("prop-d-2div", Options(fixtures_dir=tmp_path))]) == 0


def test_crash_is_failure():
    def boom(options):
        raise RuntimeError("kaput")
    rep = run(recipes.Recipe("boom", "crashes", boom))
    assert rep.status == FAIL and "kaput" in rep.message
    assert exit_code([rep]) == 1


def test_check_and_report_serialisation():
    from fractions import Fraction
    c = Check("half", Fraction(1, 2), Fraction(2, 4), "derived")
    assert c.ok and c.as_dict()["expected"] == "1/2"
    with pytest.raises(ValueError):
        Check("x", 1, 1, "folklore")
    rep = Report("r", "s", PASS, [c], seconds=1.5)
    assert "seconds" not in rep.as_dict() and rep.as_dict(timings=True)["seconds"] == 1.5
    assert to_plain({(1, 2): [Fraction(3), None, True]}) == {"(1, 2)": ["3", None, True]}
