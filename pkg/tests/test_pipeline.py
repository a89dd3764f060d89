import copy
import json

import pytest

from k3dual import dataset, io
from k3dual.errors import InputError
from k3dual.pipeline import (
    CaseDefinition,
    DualityReport,
    Expectation,
    SearchConfig,
    builtin_case,
    builtin_cases,
    case_from_json,
    format_table,
    reverify,
    verify_pair,
)
from k3dual.polytope import convex_hull

from conftest import CUBE, L0_POSITIVE, OCTAHEDRON

EXPECTED_WARN = {"Z10": {7, 9}, "U10": {6}, "Q17_Z20": set(), "W10": {5}}


def test_dataset_is_consistent():
    assert dataset.self_check() == []
    assert [c.name for c in builtin_cases()] == list(dataset.CASE_NAMES)
    assert len(dataset.CASE_NAMES) == 4
    with pytest.raises(InputError):
        builtin_case("nope")


@pytest.mark.parametrize("name", dataset.CASE_NAMES)
def test_builtin_cases_pass(reports, name):
    r = reports[name]
    assert r.verdict == "PASS"
    assert [s.number for s in r.steps] == list(range(1, 11))
    assert {s.status for s in r.steps} <= {"PASS", "WARN"}
    assert {s.number for s in r.steps if s.status == "WARN"} == EXPECTED_WARN[name]


def test_warn_notes_explain_the_disagreement(reports):
    z = " ".join(reports["Z10"].notes)
    assert "= 7; recomputed 6" in z and "= 9; recomputed 8" in z and "U+E6+E8" in z
    assert "l(A) = 2" in " ".join(reports["U10"].notes)
    assert "[1, 7, 10]" in " ".join(reports["W10"].notes)
    assert reports["Q17_Z20"].notes == []


def test_table_rows(reports):
    rows = {n: reports[n].table_row() for n in dataset.CASE_NAMES}
    assert rows["Z10"] == {"B": "Z10", "Pic": "U+D5+E7", "rho": 14, "|discr|": 8, "rho'": 6, "Pic'": "U+A1+A3", "B'": "Z10"}
    assert (rows["U10"]["rho"], rows["U10"]["|discr|"], rows["U10"]["rho'"]) == (17, 18, 3)
    assert (rows["Q17_Z20"]["rho"], rows["Q17_Z20"]["|discr|"], rows["Q17_Z20"]["rho'"]) == (15, 6, 5)
    assert (rows["W10"]["rho"], rows["W10"]["|discr|"], rows["W10"]["rho'"]) == (18, 4, 2)
    assert rows["U10"]["Pic"] == "U+K1" and rows["W10"]["Pic"] == "U+K2"
    text = format_table([reports[n] for n in dataset.CASE_NAMES])
    assert text.splitlines()[0].split() == ["B", "Pic", "rho", "|discr|", "rho'", "Pic'", "B'", "verdict"]
    assert "notes:" in text


def test_report_is_deterministic():
    case = builtin_case("Q17_Z20")
    a = io.dumps(verify_pair(case))
    b = io.dumps(verify_pair(case))
    assert a == b


@pytest.mark.parametrize("name", dataset.CASE_NAMES)
def test_round_trip_and_reverify(reports, name):
    d = json.loads(io.dumps(reports[name]))
    back = DualityReport.from_dict(d)
    assert back.verdict == reports[name].verdict
    assert io.dumps(back) == io.dumps(reports[name])
    assert reverify(d) == []


def test_reverify_detects_tampering(reports):
    d = json.loads(io.dumps(reports["U10"]))
    bad = copy.deepcopy(d)
    T = bad["steps"][1]["details"]["T"]
    T[0] = [x + 1 for x in T[0]]
    assert any("step 2" in m for m in reverify(bad))
    bad = copy.deepcopy(d)
    bad["steps"][7]["details"]["witness"] = [[2]]
    assert any("step 8" in m for m in reverify(bad))
    bad = copy.deepcopy(d)
    bad["steps"][9]["details"]["complement"]["f"][0] += 1
    assert reverify(bad)
    bad = copy.deepcopy(d)
    bad["steps"][8]["details"]["basis_change"]["gram"][0][0] = 2
    assert any("basis change" in m for m in reverify(bad))
    bad = copy.deepcopy(d)
    bad["schema_version"] = "0.1"
    with pytest.raises(InputError):
        reverify(bad)


def test_isometry_witness_tampering(reports):
    d = json.loads(io.dumps(reports["Z10"]))
    iso = d["steps"][8]["details"]["delta_prime"]["isometry"]
    # swapping the two hyperbolic rows is an automorphism of U, so still valid
    iso[0], iso[1] = iso[1], iso[0]
    assert reverify(d) == []
    iso[2] = [x + y for x, y in zip(iso[2], iso[3])]
    assert any("isometry" in m for m in reverify(d))


@pytest.mark.parametrize("name", dataset.CASE_NAMES)
def test_swapped_case(name):
    r = verify_pair(builtin_case(name).swapped())
    assert r.verdict == "PASS"
    assert r.step(3).details == {"delta": 0, "delta_prime": 0}
    assert r.step(4).details["sum"] == 20


def test_cube_pair_without_expectations():
    case = CaseDefinition("cube", convex_hull(CUBE), convex_hull(OCTAHEDRON))
    r = verify_pair(case)
    assert r.verdict == "PASS"
    assert (r.step(4).details["rho_delta"], r.step(4).details["rho_delta_prime"]) == (17, 3)
    assert r.step(9).status == "SKIP"


def test_wrong_expectation_fails_at_step_4():
    case = CaseDefinition("cube", convex_hull(CUBE), convex_hull(OCTAHEDRON), expected=Expectation(rho_delta=14))
    r = verify_pair(case)
    assert r.verdict == "FAIL"
    assert r.step(4).status == "FAIL"
    assert "expected 14" in r.step(4).notes[0]


def test_wrong_golden_fails_at_step_5():
    raw = copy.deepcopy(dataset.raw_case("Q17_Z20"))
    raw["golden"]["gram_delta"][0][0] = 0
    r = verify_pair(case_from_json(raw))
    assert r.step(5).status == "FAIL" and r.verdict == "FAIL"


def test_non_dual_pair_fails_at_step_2(cube):
    r = verify_pair(CaseDefinition("cc", cube, cube))
    assert r.step(2).status == "FAIL" and r.verdict == "FAIL"


def test_l0_positive_skips_the_rest():
    P = convex_hull(L0_POSITIVE)
    from k3dual.polytope import polar_dual

    r = verify_pair(CaseDefinition("l0", P, polar_dual(P)))
    assert r.step(3).status == "FAIL"
    assert all(r.step(n).status == "SKIP" for n in range(4, 11))


def test_non_reflexive_pair():
    big = convex_hull([tuple(2 * c for c in p) for p in CUBE])
    r = verify_pair(CaseDefinition("big", big, big))
    assert r.step(1).status == "FAIL"
    assert r.verdict == "FAIL"


def test_config_switches():
    case = builtin_case("W10")
    r = verify_pair(case, SearchConfig(split_u=False))
    assert r.step(10).status == "SKIP"
    assert r.config["split_u"] is False


@pytest.mark.parametrize(
    "mutate,match",
    [
        (lambda d: d.pop("delta"), "delta: missing"),
        (lambda d: d["dropped"].update(delta=[1, 2]), "dropped.delta"),
        (lambda d: d["dropped"].update(other=[1, 2, 3]), "unknown side"),
        (lambda d: d["expected"].update(pic_delta="U+Q7"), "expected.pic_delta"),
        (lambda d: d["ordering"]["delta"].__setitem__(0, [1, 2]), r"ordering.delta\[0\]"),
    ],
)
def test_case_from_json_errors(mutate, match):
    d = copy.deepcopy(dataset.raw_case("Z10"))
    mutate(d)
    with pytest.raises(InputError, match=match):
        case_from_json(d)
