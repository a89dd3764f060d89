import json
import subprocess
import sys

import pytest

from k3dual import dataset
from k3dual.cli import run

from conftest import CUBE, OCTAHEDRON


@pytest.fixture
def cube_file(tmp_path):
    p = tmp_path / "cube.json"
    p.write_text(json.dumps({"name": "cube", "vertices": CUBE}), encoding="utf-8")
    return p


def _json(capsys, argv, code=0):
    assert run([str(a) for a in argv]) == code
    return json.loads(capsys.readouterr().out)


def test_dual(capsys, cube_file):
    out = _json(capsys, ["dual", cube_file])
    assert sorted(map(tuple, out["vertices"])) == sorted(OCTAHEDRON)
    assert out["name"] == "cube*"
    assert run(["dual", str(cube_file), "--format", "text"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 6


def test_rays(capsys, cube_file):
    out = _json(capsys, ["rays", cube_file])
    assert len(out["rays"]) == 20 and out["picard_number"] == 17 and out["rk_l0"] == 0
    assert out["counts"] == {"vertex": 8, "edge": 12, "facet": 6, "interior": 1}


def test_picard_with_drop_and_order(capsys, tmp_path):
    c = dataset.raw_case("U10")
    rays = c["ordering"]["delta_prime"]
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"vertices": rays}), encoding="utf-8")
    inline = ";".join(",".join(map(str, r)) for r in rays)
    drop = ",".join(map(str, c["dropped"]["delta_prime"]))
    out = _json(capsys, ["picard", p, f"--order={inline}", "--drop", drop])
    assert out["gram"] == c["golden"]["gram_delta_prime"]
    assert out["dropped"] == c["dropped"]["delta_prime"]
    order_file = tmp_path / "order.json"
    order_file.write_text(json.dumps({"rays": rays}), encoding="utf-8")
    assert _json(capsys, ["picard", p, "--order", order_file, "--drop", drop])["gram"] == out["gram"]


def test_picard_bad_drop(capsys, cube_file):
    assert run(["picard", str(cube_file), "--drop", "1,2"]) == 2
    assert "--drop" in capsys.readouterr().err
    assert run(["picard", str(cube_file), "--drop", "1,1,2"]) == 2


def test_lattice_info(capsys):
    out = _json(capsys, ["lattice", "info", "U+A1+A3"])
    assert out["det"] == -8 and out["rank"] == 6 and out["signature"] == [1, 5]
    assert out["invariant_factors"] == [2, 4]


def test_lattice_info_from_file(capsys, tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"label": "g", "gram": dataset.raw_case("W10")["golden"]["gram_delta"]}), encoding="utf-8")
    out = _json(capsys, ["lattice", "info", p])
    assert (out["rank"], abs(out["det"]), out["invariant_factors"]) == (18, 4, [2, 2])


def test_lattice_isometry(capsys, tmp_path):
    p = tmp_path / "z.json"
    p.write_text(json.dumps({"gram": dataset.raw_case("Z10")["golden"]["gram_delta"]}), encoding="utf-8")
    out = _json(capsys, ["lattice", "isometry", p, "U+D5+E7"])
    assert out["found"] and len(out["witness"]) == 14
    out = _json(capsys, ["lattice", "isometry", "A2", "A1+A1", "--bound", "2"], code=1)
    assert out == {"found": False, "search_bound": 2, "witness": None}


def test_split_u(capsys, tmp_path):
    p = tmp_path / "w.json"
    p.write_text(json.dumps({"gram": dataset.raw_case("W10")["golden"]["gram_delta"]}), encoding="utf-8")
    out = _json(capsys, ["lattice", "split-u", p, "--bound", "4"])
    assert out["found"]
    assert _json(capsys, ["lattice", "split-u", "E8"], code=1)["found"] is False


def test_env_bound(capsys, monkeypatch):
    monkeypatch.setenv("K3DUAL_SEARCH_BOUND", "3")
    out = _json(capsys, ["lattice", "isometry", "A2", "A1+A1"], code=1)
    assert out["search_bound"] == 3
    monkeypatch.setenv("K3DUAL_SEARCH_BOUND", "many")
    assert run(["lattice", "isometry", "A2", "A1+A1"]) == 2
    assert "K3DUAL_SEARCH_BOUND" in capsys.readouterr().err


@pytest.mark.parametrize("name", dataset.CASE_NAMES)
def test_verify_pair_builtin(capsys, name):
    assert run(["verify-pair", name]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out.splitlines()[2]
    report = _json(capsys, ["verify-pair", name, "--format", "json"])
    assert report["verdict"] == "PASS" and len(report["steps"]) == 10


def test_verify_pair_failing_case(capsys, tmp_path):
    d = dict(dataset.raw_case("Q17_Z20"))
    d["expected"] = dict(d["expected"], rho_delta=99)
    p = tmp_path / "case.json"
    p.write_text(json.dumps(d), encoding="utf-8")
    report = _json(capsys, ["verify-pair", p, "--format", "json"], code=1)
    assert report["verdict"] == "FAIL"


def test_dataset_list_and_report(capsys):
    out = _json(capsys, ["dataset", "list", "--format", "json"])
    assert [c["name"] for c in out["cases"]] == list(dataset.CASE_NAMES)
    assert run(["report", "--cases", "Q17_Z20", "W10"]) == 0
    text = capsys.readouterr().out
    assert "Q17" in text and "W10" in text


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "vertices": [[1, 0, 0], [0, 1]]\n}\n', encoding="utf-8")
    assert run(["dual", str(bad)]) == 2
    assert "bad.json:2: vertices[1]: expected 3 entries, got 2" in capsys.readouterr().err
    assert run(["dual", str(tmp_path / "missing.json")]) == 2
    assert run(["lattice", "info", "U+Z9"]) == 2
    assert run(["verify-pair", "nope"]) == 2
    assert run(["lattice", "split-u", "U", "--bound", "0"]) == 2
    scaled = tmp_path / "scaled.json"
    scaled.write_text(json.dumps({"vertices": [[2 * c for c in p] for p in CUBE]}), encoding="utf-8")
    assert run(["dual", str(scaled)]) == 2
    with pytest.raises(SystemExit) as info:
        run(["frobnicate"])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "k3dual", "lattice", "info", "A1", "--format", "text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "det: -2" in proc.stdout
