import json

import pytest

from supercoh.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cohomology_ga1(capsys):
    code, out, _ = run(capsys, "cohomology", "--field", "3", "--r", "1", "--s", "0", "--maxdeg", "8")
    assert code == 0
    data = json.loads(out)
    assert data["poincare"] == [1, 2, 3, 4, 5, 6, 7, 8, 9]
    assert all(r["passed"] for r in data["relations"])
    assert data["algebra"]["field"] == "3"
    assert "version" in data and "witnesses" in data


def test_cohomology_general(capsys):
    code, out, _ = run(capsys, "cohomology", "--field", "3^2", "--r", "0", "--s", "2", "--mu", "1,w", "--maxdeg", "9")
    assert code == 0
    assert json.loads(out)["passed"]


def test_cohomology_refuses_dependent_mu(capsys):
    code, _, err = run(capsys, "cohomology", "--field", "3", "--r", "0", "--s", "2", "--mu", "1,2")
    assert code == 2
    assert "NotFaithful" in json.loads(err)["error"]


@pytest.mark.parametrize(
    "args",
    [
        ["invariants", "--field", "4"],
        ["invariants", "--field", "3", "--r", "0", "--s", "1"],
        ["rankvariety", "--field", "3", "--r", "1", "--s", "0", "--i", "3"],
        ["cohomology", "--field", "3", "--r", "1", "--s", "1", "--mu", "1", "--maxdeg", "3"],
        ["rankvariety", "--field", "3", "--sample-field", "5"],
    ],
)
def test_invalid_input_exit_code(capsys, args):
    code, _, _ = run(capsys, *args)
    assert code == 2


def test_sympowers(capsys):
    code, out, _ = run(capsys, "sympowers", "--field", "3", "--r", "1", "--s", "1", "--mu", "1", "--max-n", "18")
    assert code == 0
    data = json.loads(out)
    assert data["passed"] and len(data["rows"]) == 19


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "--field", "3", "--r", "1", "--s", "0", "--maxdeg", "9")
    assert code == 0
    assert json.loads(out)["dims"] == [1, 1, 1, 2, 2, 2, 3, 3, 3, 4]


def test_rankvariety(capsys):
    code, out, _ = run(
        capsys, "rankvariety", "--field", "3", "--r", "1", "--s", "1", "--mu", "1", "--i", "1", "--sample-field", "3"
    )
    assert code == 0
    assert json.loads(out)["non_free"] == [["1", "1"], ["2", "2"]]


@pytest.mark.parametrize("fmt", ["json", "csv", "text"])
def test_reports_are_deterministic(capsys, fmt):
    args = ["cohomology", "--field", "3", "--r", "0", "--s", "1", "--mu", "1", "--format", fmt]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second and first


def test_csv_and_text_formats(capsys):
    _, out, _ = run(capsys, "invariants", "--field", "3", "--r", "1", "--s", "0", "--maxdeg", "3", "--format", "csv")
    assert out.splitlines()[0] == "degree,dim,predicted_dim,basis"
    _, out, _ = run(capsys, "rankvariety", "--field", "3", "--r", "2", "--s", "0", "--format", "text")
    assert "PASS" in out.splitlines()[0]


def test_timings_flag(capsys):
    _, out, _ = run(capsys, "invariants", "--field", "3", "--r", "1", "--s", "0", "--timings")
    assert "timings" in json.loads(out)
    _, out, _ = run(capsys, "invariants", "--field", "3", "--r", "1", "--s", "0")
    assert "timings" not in json.loads(out)


def test_cache_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SUPERCOH_CACHE", str(tmp_path))
    code, out, _ = run(capsys, "cohomology", "--field", "3", "--r", "1", "--s", "0", "--maxdeg", "6")
    assert code == 0
    assert any(tmp_path.iterdir())
    code, again, _ = run(capsys, "cohomology", "--field", "3", "--r", "1", "--s", "0", "--maxdeg", "6")
    assert again == out
