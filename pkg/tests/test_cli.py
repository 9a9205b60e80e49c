import json

import pytest

from klimm.cli import main
from klimm.linalg import RatMatrix, is_k_positive


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def matrix_file(tmp_path, capsys):
    path = tmp_path / "m.json"
    assert main(["gen", "4", "2", "3", "--out", str(path)]) == 0
    capsys.readouterr()
    return path


def test_gen_is_verified_and_deterministic(tmp_path, capsys):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["gen", "3", "2", "17", "--out", str(first)]) == 0
    assert main(["gen", "3", "2", "17", "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    m = RatMatrix.load(str(first))
    assert is_k_positive(m, 2)
    code, out, _ = run(capsys, "gen", "3", "3", "1")
    assert code == 0 and is_k_positive(RatMatrix.loads(out), 3)
    code, _, _ = run(capsys, "gen", "3", "5", "1")
    assert code == 2


def test_gen_failure_exit_code(monkeypatch, capsys, caplog):
    from klimm import cli
    from klimm.linalg import GenerationError

    def fail(*args, **kwargs):
        raise GenerationError("no luck")

    monkeypatch.setattr(cli, "gen_k_positive", fail)
    code, _, _ = run(capsys, "gen", "4", "2", "1")
    assert code == 4 and "no luck" in caplog.text


def test_imm_positive_on_two_positive(matrix_file, capsys):
    code, out, _ = run(capsys, "imm", "2413", "--matrix", str(matrix_file),
                       "--method", "determinantal")
    report = json.loads(out)
    assert code == 0 and report["sign"] == 1
    assert report["sign_prediction"] == "positive" and report["k_condition"] == 2


def test_imm_all_methods_agree(matrix_file, capsys):
    code, out, _ = run(capsys, "imm", "2,4,1,3", "--matrix", str(matrix_file), "--method", "all")
    data = json.loads(out)
    assert code == 0 and data["agree"]
    assert [r["method"] for r in data["reports"]] == [
        "generic", "kl_full", "kl_avoiding_sum", "determinantal"]


def test_imm_identity_is_det(tmp_path, capsys):
    path = tmp_path / "m.csv"
    path.write_text("2,1,0\n1,3,1\n0,1,4\n")
    code, out, _ = run(capsys, "imm", "123", "--matrix", str(path))
    assert code == 0 and json.loads(out)["value"] == "18"


def test_imm_exit_codes(matrix_file, tmp_path, capsys):
    code, out, _ = run(capsys, "imm", "2143", "--matrix", str(matrix_file),
                       "--method", "determinantal")
    assert code == 2 and json.loads(out)["witness"] == [1, 2, 3, 4]
    code, _, _ = run(capsys, "imm", "213", "--matrix", str(matrix_file))
    assert code == 2
    code, _, _ = run(capsys, "imm", "2413", "--matrix", str(tmp_path / "missing.json"))
    assert code == 1
    bad = tmp_path / "bad.json"
    bad.write_text("[[1, 2], [3")
    code, _, _ = run(capsys, "imm", "21", "--matrix", str(bad))
    assert code == 1


def test_graph_render(capsys):
    code, out, _ = run(capsys, "graph", "321")
    assert code == 0
    assert out.splitlines()[1:4] == ["|     x |", "|   x   |", "| x     |"]
    code, out, _ = run(capsys, "graph", "14253", "--json")
    assert json.loads(out)["n"] == 5


def test_graph_boxes(capsys):
    code, out, _ = run(capsys, "graph", "3714562", "--boxes")
    colors = [line.split()[0] for line in out.splitlines() if line[0].isalpha()]
    assert code == 0 and colors == ["blue", "red", "blue"]
    code, out, _ = run(capsys, "boxes", "3472165", "--mode", "diag")
    assert code == 0 and all("color" in b for b in json.loads(out))


def test_kl_command(capsys):
    code, out, _ = run(capsys, "kl", "1234", "4231")
    data = json.loads(out)
    assert code == 0 and data["coeffs"] == [1, 1] and data["at_one"] == 2


def test_verify_command(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "verify", "--suite", "thm-main", "--n-max", "4",
                       "--samples", "3", "--seed", "8", "--output", str(out_path),
                       "--jobs", "1")
    assert code == 0 and json.loads(out)["passed"]
    assert out_path.read_text().startswith("# klimm-sweep/1")
    code, out, _ = run(capsys, "verify", "--suite", "conjecture-pyl", "--n-max", "4",
                       "--samples", "2", "--seed", "8", "--jobs", "1")
    assert code == 0 and json.loads(out)["notes"] == ["no counterexample found"]


def test_verify_failure_exit_code(monkeypatch, capsys):
    from klimm import cli
    from klimm.verify import CheckRow, SuiteResult

    def failing(config):
        return SuiteResult(config.suite, [CheckRow("case", "check", False, "witness")])

    monkeypatch.setattr(cli, "run_suite", failing)
    code, out, _ = run(capsys, "verify", "--suite", "patterns", "--n-max", "3",
                       "--samples", "1", "--seed", "0")
    assert code == 3 and json.loads(out)["failures"][0]["detail"] == "witness"


def test_verify_requires_seed(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "--suite", "patterns", "--n-max", "3", "--samples", "1"])


def test_bad_permutation_argument(capsys):
    with pytest.raises(SystemExit):
        main(["graph", "12x"])
