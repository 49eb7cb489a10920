import json

import pytest

from newform_periods.errors import ConfigError, InsufficientGrid, SchemaError
from newform_periods.verify import (
    Scenario,
    degree_bound,
    grid_certify,
    load_scenarios,
    load_suite,
    run_scenario,
    run_suite,
)

UNR2 = [
    {"rank": 2, "conductor": 0, "satake": ["1/2", "2"], "field": {"q": 13}},
    {"rank": 2, "conductor": 0, "satake": ["1/3", "3"], "field": {"q": 13}},
]


def test_rs_gl2_scenario_passes():
    rep = run_scenario({"name": "gl2", "kind": "rs", "specs": UNR2, "order": 10})
    assert rep.passed, rep.checks
    assert rep.checks["sqrt_q_vanishing"]["passed"]
    assert rep.first_mismatch is None


def test_wrong_expectation_reports_first_mismatch():
    sc = {"name": "bad", "kind": "rs", "specs": UNR2, "order": 6,
          "expected": {"factors": [["1/6", 1]]}}
    rep = run_scenario(sc)
    assert not rep.passed and rep.exit_class == 1
    m = rep.first_mismatch
    assert m["degree"] == 1
    assert m["expected"] == "1/6"


def test_config_error_is_per_scenario():
    rep = run_scenario({"name": "broken", "kind": "rs", "specs": [{"rank": 2}]})
    assert rep.error["exit_code"] == 2
    rep = run_scenario({"name": "typo", "kind": "rs", "specs": UNR2, "ordr": 3})
    assert rep.error["type"] == "SchemaError"


def test_math_error_is_exit_three():
    specs = [{"rank": 1, "conductor": 0, "satake": ["13"], "field": {"q": 13}},
             {"rank": 1, "conductor": 0, "satake": ["1"], "field": {"q": 13}}]
    rep = run_scenario({"name": "pole", "kind": "rs", "specs": specs, "special_value": True})
    assert rep.error["exit_code"] == 3
    assert rep.error["factor"] == "(1 - 13 t)"


def test_corrections_and_distinguished():
    sc = {"name": "c", "kind": "rs", "specs": UNR2, "order": 6,
          "corrections": [2, 1], "distinguished": True}
    rep = run_scenario(sc)
    assert rep.passed
    assert rep.checks["corrections"]["computed"] == ["2", "1"]


def test_bundled_suite_passes():
    result = run_suite(load_suite("paper-theorems"))
    assert result.exit_code == 0, [r.scenario for r in result.reports if not r.passed]
    assert result.summary["failed"] == 0
    names = [r.scenario for r in result.reports]
    assert names == sorted(names)
    assert json.loads(result.lines()[-1])["run"] == len(names)


def test_suite_is_deterministic_across_jobs():
    scs = load_suite("paper-theorems")[:6]
    assert run_suite(scs, jobs=1).lines() == run_suite(scs, jobs=3).lines()


def test_exit_code_priority():
    scs = [
        {"name": "a", "kind": "rs", "specs": UNR2, "order": 3, "expected": {"factors": []}},
        {"name": "b", "kind": "nope"},
    ]
    assert run_suite(scs).exit_code == 2


def test_duplicate_names_and_unknown_suite(tmp_path, monkeypatch):
    with pytest.raises(SchemaError):
        load_scenarios([{"name": "x"}, {"name": "x"}])
    with pytest.raises(ConfigError):
        load_suite("no-such-suite")
    (tmp_path / "mine.json").write_text(json.dumps([{"name": "m", "kind": "rs", "specs": UNR2, "order": 2}]))
    monkeypatch.setenv("WHITTAKER_SUITE_DIR", str(tmp_path))
    assert [s.name for s in load_suite("mine")] == ["m"]


def test_scenario_keeps_raw_config():
    sc = Scenario.from_config({"kind": "rs"})
    assert sc.name == "<unnamed>"
    assert run_scenario(sc).error["exit_code"] == 2


def test_degree_bounds():
    assert degree_bound("cauchy", 5) == 5
    assert degree_bound("littlewood-even-rows", 5) == 10


@pytest.mark.parametrize("identity", ["cauchy", "littlewood", "littlewood-even-columns", "littlewood-even-rows"])
def test_grid_certify_small(identity):
    rep = grid_certify(identity, 2, 4)
    assert rep.passed, rep.first_mismatch
    assert rep.checks["certificate"]["grid_size"] > rep.checks["certificate"]["degree_bound"]


def test_grid_certify_rectangular_cauchy():
    assert grid_certify("cauchy", 2, 4, p=3).passed


def test_grid_certify_random_grid_is_seeded():
    a = grid_certify("littlewood", 2, 4, seed=7)
    b = grid_certify("littlewood", 2, 4, seed=7)
    assert a.passed and a.line() == b.line()


def test_grid_too_small():
    with pytest.raises(InsufficientGrid):
        grid_certify("cauchy", 2, 4, grid=[1, 2, 3, 4])
