import json
import subprocess
import sys

import pytest

from sphere_rigidity.bruteforce import perturbed_oracle
from sphere_rigidity.cli import main
from sphere_rigidity.extraction import PointMap, composition_operator
from sphere_rigidity.jsonio import dumps, sphere_map_to_json
from sphere_rigidity.lattice import GridSpec, SpaceModel


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def statuses(doc):
    return {c["name"]: c["status"] for c in doc["report"]["checks"]}


@pytest.fixture
def shorthand(tmp_path):
    path = tmp_path / "sigma.json"
    path.write_text(json.dumps({"type": "composition", "sigma": {"p1": "p2", "p2": "p3", "p3": "p1"}, "m": 2}))
    return path


@pytest.fixture
def violator(tmp_path):
    # (1,0) -> (1,0), (0,1) -> (1,1), (1,1) -> (0,1)
    path = tmp_path / "violator.json"
    path.write_text(json.dumps({
        "type": "table", "domain": ["p1", "p2"], "codomain": ["p1", "p2"], "m": 1,
        "map": [
            [["1/1", "0/1"], ["1/1", "0/1"]],
            [["0/1", "1/1"], ["1/1", "1/1"]],
            [["1/1", "1/1"], ["0/1", "1/1"]],
        ],
    }))
    return path


class TestVerifyLemmas:
    def test_passes(self, capsys):
        code, out, _ = run(capsys, "verify-lemmas", "--n", 2, "--m", 2)
        assert code == 0
        doc = json.loads(out)
        assert doc["summary"]["fail"] == 0
        assert len(doc["checks"]) == 9

    def test_larger_instance(self, capsys):
        code, out, _ = run(capsys, "verify-lemmas", "--n", 3, "--m", 3)
        assert code == 0

    def test_zero_points_is_usage_error(self, capsys):
        code, out, err = run(capsys, "verify-lemmas", "--n", 0, "--m", 2)
        assert code == 2 and out == ""
        assert err.startswith("error:") and err.count("\n") == 1

    def test_cap(self, capsys):
        code, _, err = run(capsys, "verify-lemmas", "--n", 3, "--m", 3, "--cap", 10)
        assert code == 2 and err.startswith("error: instance too large")

    def test_missing_flag(self, capsys):
        code, _, err = run(capsys, "verify-lemmas", "--n", 2)
        assert code == 2 and err.startswith("error:")

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, "verify-lemmas", "--n", 2, "--m", 1, "--out", target)
        assert code == 0 and target.read_text() == out


class TestExtract:
    def test_shorthand_echoes_sigma(self, capsys, shorthand):
        code, out, _ = run(capsys, "extract", shorthand)
        assert code == 0
        doc = json.loads(out)
        assert doc["sigma"] == {"p1": "p2", "p2": "p3", "p3": "p1"}
        assert set(statuses(doc).values()) <= {"pass", "skipped"}
        for name in ("isometry", "ball-transport", "composition-equality", "unique-extension"):
            assert statuses(doc)[name] == "pass"

    def test_table_gives_identical_output(self, capsys, shorthand, tmp_path):
        space = SpaceModel.standard(3)
        sigma = PointMap.from_mapping(space, space, {"p1": "p2", "p2": "p3", "p3": "p1"})
        table = tmp_path / "table.json"
        table.write_text(dumps(sphere_map_to_json(composition_operator(sigma, GridSpec(2)))))
        _, a, _ = run(capsys, "extract", shorthand)
        _, b, _ = run(capsys, "extract", table)
        assert a == b

    def test_perturbed_oracle(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        phi = perturbed_oracle(PointMap.identity(SpaceModel.standard(2)), GridSpec(2), [(2, 3)])
        path.write_text(dumps(sphere_map_to_json(phi)))
        code, out, err = run(capsys, "extract", path)
        assert code == 1 and err.startswith("error:")
        doc = json.loads(out)
        assert doc["sigma"] is None
        (check,) = doc["report"]["checks"]
        assert check["name"] == "isometry" and check["status"] == "fail"
        assert check["counterexample"]["distance"] != check["counterexample"]["image_distance"]

    def test_exotic_isometry_fails_extraction(self, capsys, tmp_path):
        # equilateral 7-point sphere; swapping two entries keeps every distance
        path = tmp_path / "exotic.json"
        phi = perturbed_oracle(PointMap.identity(SpaceModel.standard(3)), GridSpec(1), [(5, 6)])
        path.write_text(dumps(sphere_map_to_json(phi)))
        code, out, _ = run(capsys, "extract", path)
        assert code == 1
        doc = statuses(json.loads(out))
        assert doc["isometry"] == "pass" and doc["ball-transport"] == "pass" and doc["extraction"] == "fail"

    @pytest.mark.parametrize("text", ["", "{", json.dumps({"type": "table", "domain": ["p1"], "codomain": ["p1"], "m": 1, "map": []})])
    def test_malformed(self, capsys, tmp_path, text):
        path = tmp_path / "x.json"
        path.write_text(text)
        code, out, err = run(capsys, "extract", path)
        assert code == 2 and out == "" and err.startswith("error: malformed")

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "extract", tmp_path / "nope.json")
        assert code == 2 and err.startswith("error: cannot read")


class TestPhaseCheck:
    def test_composition_passes(self, capsys, shorthand):
        code, out, _ = run(capsys, "phase-check", shorthand)
        assert code == 0
        st = statuses(json.loads(out))
        assert st["phase-condition"] == st["positivity"] == st["phase-implies-isometry"] == "pass"
        assert st["extraction"] == "pass"

    def test_violator(self, capsys, violator):
        code, out, err = run(capsys, "phase-check", violator)
        assert code == 1 and err.startswith("error:")
        doc = json.loads(out)
        st = statuses(doc)
        assert st["phase-condition"] == "fail"
        assert st["positivity"] == "pass"
        assert st["phase-implies-isometry"] == "skipped"
        assert st["extraction"] == "skipped"
        ce = doc["report"]["checks"][0]["counterexample"]
        assert ce["f"] == {"p1": "0/1", "p2": "1/1"}
        assert ce["g"] == {"p1": "1/1", "p2": "0/1"}
        assert ce["norms"] == ["1/1", "1/1"]
        assert ce["image_norms"] == ["1/1", "2/1"]

    def test_empty_table(self, capsys, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({"type": "table", "domain": ["p1"], "codomain": ["p1"], "m": 1, "map": []}))
        code, _, err = run(capsys, "phase-check", path)
        assert code == 2 and err.startswith("error:")


class TestBruteforce:
    def test_five_point_sphere(self, capsys):
        code, out, _ = run(capsys, "bruteforce", "--n", 2, "--m", 2)
        assert code == 0
        doc = json.loads(out)
        assert doc["counts"] == {"total": 2, "induced": 2, "exotic": 0}

    def test_single_point(self, capsys):
        code, out, _ = run(capsys, "bruteforce", "--n", 1, "--m", 5)
        assert code == 0 and json.loads(out)["counts"]["total"] == 1

    def test_exotic_exit_code(self, capsys):
        code, out, err = run(capsys, "bruteforce", "--n", 3, "--m", 1)
        assert code == 1 and err.startswith("error:")
        assert json.loads(out)["counts"] == {"total": 5040, "induced": 6, "exotic": 5034}
        code, out2, _ = run(capsys, "bruteforce", "--n", 3, "--m", 1, "--allow-exotic")
        assert code == 0 and out2 == out

    def test_cap(self, capsys, monkeypatch):
        code, _, err = run(capsys, "bruteforce", "--n", 3, "--m", 2)
        assert code == 2 and err.startswith("error: instance too large")
        monkeypatch.setenv("SPHERE_RIGIDITY_CAP", "19")
        code, _, _ = run(capsys, "bruteforce", "--n", 3, "--m", 2)
        assert code == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sphere_rigidity.cli", "bruteforce", "--n", "2", "--m", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["sphere_size"] == 5
