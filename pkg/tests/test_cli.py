import json
import subprocess
import sys

import pytest

from godeaux import recipes
from godeaux.cli import main
from godeaux.recipes import FIXTURES_ENV, Options, resolve_fixture

DATA = resolve_fixture("p4_degeneration.sys", Options()).parent


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def structured(capsys, *argv):
    code, out, err = run(capsys, "--format", "structured", *argv)
    assert code == 0, err
    return json.loads(out)


def test_fibrations(capsys):
    d = structured(capsys, "fibrations")
    assert [c["config"] for c in d["configurations"]][:5] == ["(4,4;4)", "(3,3;6)", "(2,6;6)", "(2,4;8)",
                                                              "(2,3;12)"]
    assert {r["case"] for r in d["correspondence"]} == set("abcde")
    code, out, _ = run(capsys, "fibrations", "--max-fibers", "3")
    assert code == 0 and "(2,2,2,2;2)" not in out and "(2,2,2;4)" in out


def test_orbits(capsys):
    d = structured(capsys, "orbits")
    assert [(o["representative"], o["size"]) for o in d["orbits"]] == [("[H]", 135), ("[K]", 1)]


def test_invariants(capsys):
    d = structured(capsys, "invariants", "--chain", "36", "5")
    assert d["chain"]["selfints"] == [8, 2, 2, 2, 2] and d["chain"]["wahl"] == [6, 1]
    d = structured(capsys, "invariants", "--bundle", "2", "1", "--c1K", "1")
    assert d["bundle"]["verdict"] == "numerically exceptional"
    code, _, err = run(capsys, "invariants", "--chain", "16", "4")
    assert code == 2 and "gcd" in err


def test_lattice_klp(capsys):
    d = structured(capsys, "lattice", str(DATA / "klp_fiber.gram"), "--klp")
    k = d["klp"]
    assert (k["index_L_A"], k["index_L_N"], k["k_two_divisible"]) == (6, 3, False)


def test_wps_scan(capsys):
    d = structured(capsys, "wps-scan", str(DATA / "p4_degeneration.sys"), "--prime", "41")
    assert len(d["singular"]) == 4
    assert all(p["coords"][:3] == ["0", "0", "1"] and p["stabilizer_order"] == 4 for p in d["singular"])
    d = structured(capsys, "wps-scan", str(DATA / "p4_degeneration.sys"), "--prime", "17", "--stratum", "u0 u1")
    assert d["stratum"]["verdict"] == "transverse" and len(d["stratum"]["points"]) == 4


def test_wps_scan_guards(capsys):
    code, _, err = run(capsys, "wps-scan", str(DATA / "p4_degeneration.sys"), "--prime", "13")
    assert code == 2 and "mod 8" in err
    code, _, err = run(capsys, "wps-scan", str(DATA / "p4_degeneration.sys"), "--prime", "5")
    assert code == 2
    code, _, err = run(capsys, "wps-scan", "/nonexistent.sys")
    assert code == 2


def test_base_locus(capsys):
    d = structured(capsys, "base-locus", str(DATA / "z4_cover.sys"), "--prime", "89")
    assert len(d["points"]) == 16 and len(d["orbits"]) == 4 and all(d["simple"])


def test_membership(capsys):
    d = structured(capsys, "membership", "--variables", "x y z", "--prime", "11", "--degree", "2", "x*y", "x")
    assert d["member"] and d["certificate"] == ["y"]
    d = structured(capsys, "membership", "--variables", "x y", "--degree", "2", "--method", "dense", "y^2", "x")
    assert d["member"] is False
    code, _, err = run(capsys, "membership", "--variables", "x y", "--degree", "3", "y^2", "x")
    assert code == 2 and "degree" in err
    code, _, err = run(capsys, "membership", "--variables", "x y", "--degree", "2", "y^2 +", "x")
    assert code == 2


def test_fermat_lines(capsys):
    d = structured(capsys, "fermat-lines", "--prime", "11")
    assert len(d["lines"]) == 75 and d["deforming_per_quintic"] == [0, 0, 0]
    code, _, err = run(capsys, "fermat-lines", "--prime", "13")
    assert code == 2 and "10" in err


def test_verify_all_single_recipe(capsys):
    d = structured(capsys, "verify-all", "--recipe", "resolution", "--recipe", "lem-c1")
    assert [r["status"] for r in d["reports"]] == ["pass", "pass"] and d["exit_code"] == 0
    assert all("seconds" not in r for r in d["reports"])
    d = structured(capsys, "verify-all", "--recipe", "thm-cases", "--timings")
    assert "seconds" in d["reports"][0]
    code, _, err = run(capsys, "verify-all", "--recipe", "no-such-recipe")
    assert code == 2


def test_pending_fixture_via_flag(tmp_path, capsys):
    d = structured(capsys, "--fixtures-dir", str(tmp_path), "verify-all", "--recipe", "prop-d-2div",
                   "--recipe", "thm-cases")
    assert [r["status"] for r in d["reports"]] == ["pending-fixture", "pass"]
    assert d["exit_code"] == 0


def test_pending_fixture_via_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(FIXTURES_ENV, str(tmp_path))
    d = structured(capsys, "verify-all", "--recipe", "prop-d-2div")
    assert d["reports"][0]["status"] == "pending-fixture"
    # once the fixture appears the same recipe runs
    (tmp_path / "klp_fiber.gram").write_text((DATA / "klp_fiber.gram").read_text())
    d = structured(capsys, "verify-all", "--recipe", "prop-d-2div")
    assert d["reports"][0]["status"] == "pass"


def test_global_flags_after_subcommand(capsys):
    code, out, _ = run(capsys, "orbits", "--format", "structured")
    assert code == 0 and json.loads(out)["orbits"]


def test_failing_recipe_sets_exit_code(monkeypatch, capsys):
    bad = recipes.Recipe("broken", "always fails",
                         lambda options: ([recipes.Check("one", 1, 2, "trivial")], {}))
    monkeypatch.setattr(recipes, "RECIPES", recipes.RECIPES + (bad,))
    code, out, _ = run(capsys, "verify-all", "--recipe", "broken")
    assert code == 1 and "fail" in out


def test_structured_output_is_reproducible(capsys):
    args = ["--format", "structured", "verify-all", "--skip-slow"]
    first = run(capsys, *args)[1]
    second = run(capsys, *args)[1]
    assert first == second


def test_threads_do_not_change_ledger(capsys):
    one = run(capsys, "--format", "structured", "--threads", "1", "verify-all")[1]
    four = run(capsys, "--format", "structured", "--threads", "4", "verify-all")[1]
    assert one == four
    assert json.loads(one)["exit_code"] == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "godeaux", "--format", "structured", "orbits"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["qmod4"] == "1"
