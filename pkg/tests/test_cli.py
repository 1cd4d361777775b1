import csv
import json
from fractions import Fraction as F

import pytest

from conftest import GENERIC, SQUARE, normal_form_quad
from quadrex.cli import main
from quadrex.cones import labeled, sample
from quadrex.exact import fmt

PRISM = [[1, 0, 0], [0, 1, 0], [-1, 0, 1], [0, -1, 1]]


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(path)


def run(argv, tmp_path):
    out = tmp_path / "out.json"
    code = main(argv + ["--out", str(out)])
    doc = json.loads(out.read_text()) if out.exists() else None
    return code, doc


def test_classify_square(tmp_path):
    code, doc = run(["classify", write(tmp_path, "sq.json", SQUARE.to_json())], tmp_path)
    assert code == 0 and doc["schema"] == 1
    assert doc["kind"] == "Parallelogram" and doc["hamiltonian_form_order"] == 0
    assert doc["rationality"]["rational_type"] is True


def test_classify_two_half(tmp_path):
    path = write(tmp_path, "q.json", normal_form_quad(2, F(1, 2)).to_json())
    code, doc = run(["classify", path], tmp_path)
    assert code == 0 and doc["kind"] == "Generic"
    assert doc["characteristic_pair"] == ["2", "1/2"]
    r = F(doc["rationality"]["cross_ratio"])
    assert F(-2) in {r, 1 / r, 1 - r, 1 / (1 - r), r / (r - 1), (r - 1) / r}


def test_malformed_json(tmp_path, capsys):
    assert main(["classify", write(tmp_path, "bad.json", "{not json")]) == 2
    assert "parse error" in capsys.readouterr().err
    assert main(["classify", str(tmp_path / "missing.json")]) == 2


def test_solve_csc_exit_zero(tmp_path):
    quad = labeled(GENERIC, sample(GENERIC, "C", seed=3).r)
    code, doc = run(["solve", write(tmp_path, "c.json", quad.to_json())], tmp_path)
    assert code == 0
    assert doc["verdict"]["status"] == "Stable" and doc["flags"]["csc"] is True


def test_solve_not_equipoised(tmp_path):
    r = list(sample(GENERIC, "B", seed=1).r)
    r[0] += F(1, 7)
    code, doc = run(["solve", write(tmp_path, "n.json", labeled(GENERIC, r).to_json())], tmp_path)
    assert code == 11
    assert doc["verdict"]["status"] == "NotEquipoised"
    assert F(doc["verdict"]["residual"]) != 0


def test_solve_output_feeds_verify(tmp_path):
    quad = labeled(GENERIC, sample(GENERIC, "C", seed=0).r)
    solved = tmp_path / "solved.json"
    assert main(["solve", write(tmp_path, "q.json", quad.to_json()), "--out", str(solved)]) == 0
    data = json.loads(solved.read_text())
    assert data["input"]["vertices"] == quad.to_json()["vertices"]
    dump = tmp_path / "grid.csv"
    code, doc = run(["verify", str(solved), "--grid", "16", "--no-energy", "--dump", str(dump)], tmp_path)
    assert code == 0 and doc["kind"] == "Orthotoric"
    assert isinstance(doc["report"]["max_abreu_residual"], float)
    with open(dump) as fh:
        header = next(csv.reader(fh))
    assert header == ["mu1", "mu2", "H11", "H12", "H22", "S_fd", "zeta"]


def test_verify_needs_stable(tmp_path):
    r = list(sample(GENERIC, "B", seed=1).r)
    r[2] += 1
    assert main(["verify", write(tmp_path, "n.json", labeled(GENERIC, r).to_json())]) == 3


def test_cones_deterministic(tmp_path):
    path = write(tmp_path, "g.json", GENERIC.to_json())
    docs = []
    for k in range(2):
        out = tmp_path / f"k{k}.json"
        assert main(["cones", path, "--sample", "K", "--count", "3", "--seed", "7", "--out", str(out)]) == 0
        docs.append(json.loads(out.read_text()))
    assert docs[0] == docs[1]
    assert len(docs[0]["rays"]) == 3
    assert all(ray["status"] == "Stable" and ray["flags"]["csc"] for ray in docs[0]["rays"])


def test_cones_constraints(tmp_path):
    code, doc = run(["cones", write(tmp_path, "g.json", GENERIC.to_json())], tmp_path)
    assert code == 0
    assert len(doc["E"]) == 4 and len(doc["D"]) == 4


def test_destabilize_reports_failure(tmp_path, capsys):
    code, doc = run(["destabilize", write(tmp_path, "g.json", GENERIC.to_json())], tmp_path)
    # the solver does not confirm the construction (see the acceptance notes)
    assert code == 4
    assert doc["verified"] is False and "error" in doc
    assert "numeric failure" in capsys.readouterr().err


def test_destabilize_trapezoid_is_invariant_error(tmp_path):
    path = write(tmp_path, "t.json", normal_form_quad(2, 1).to_json())
    assert main(["destabilize", path]) == 3


def test_sasaki_prism(tmp_path):
    path = write(tmp_path, "cone.json", {"normals": PRISM, "reeb": ["0", "0", "1"]})
    code, doc = run(["sasaki", path, "--grid", "8"], tmp_path)
    assert code == 0
    assert doc["verdict"]["status"] == "Stable" and doc["zeta_constant"] is True
    assert doc["good"] is True and doc["degree_bound"] is True
    assert "offset" in doc["cone_lift"]


def test_potential_csv(tmp_path):
    path = write(tmp_path, "sq.json", SQUARE.to_json())
    out = tmp_path / "pot.csv"
    assert main(["potential", path, "--grid", "8", "--out", str(out)]) == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["mu1", "mu2", "G", "H11", "H12", "H22"]
    assert len(rows) > 1 and all(len(r) == 6 for r in rows)


def test_analyze(tmp_path):
    code, doc = run(["analyze", write(tmp_path, "sq.json", SQUARE.to_json()), "--grid", "16"], tmp_path)
    assert code == 0
    assert doc["classify"]["kind"] == "Parallelogram"
    assert doc["solve"]["zeta"] == [fmt(F(8)), "0", "0"]
    assert doc["verify"]["max_abreu_residual"] < 1e-9


def test_help_exits_cleanly():
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
