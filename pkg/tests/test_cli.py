import json

import pytest

from formeq.cli import EXIT_INPUT, EXIT_NOT_EQUIVALENT, EXIT_OK, EXIT_UNDECIDED, main
from formeq.transform import load_dataset

from conftest import FIXTURES
from transcripts import write_transcript

FIG = FIXTURES / "stable_pair"
PAIR = [str(FIG / "alpha.json"), str(FIG / "alpha_prime.json"), str(FIG / "instance.json")]


@pytest.fixture(scope="module")
def generated(tmp_path_factory):
    out = tmp_path_factory.mktemp("ds")
    assert main(["gen", "--out", str(out), "--seed", "0"]) == EXIT_OK
    return out


def test_gen_manifest(generated):
    manifest = json.loads((generated / "manifest.json").read_text())
    assert manifest["total"] == 146
    first = manifest["records"][0]
    assert {p.name for p in (generated / first["path"]).iterdir()} == {
        "alpha.json", "alpha_prime.json", "instance.json", "meta.json"
    }


def test_gen_empty_corpus(tmp_path, capsys):
    (tmp_path / "corpus").mkdir()
    assert main(["gen", "--corpus", str(tmp_path / "corpus"), "--out", str(tmp_path / "o")]) == EXIT_INPUT
    assert main(["gen", "--corpus", str(tmp_path / "nowhere"), "--out", str(tmp_path / "o")]) == EXIT_INPUT
    assert "error" in capsys.readouterr().err


def run_check(capsys, *extra):
    rc = main(["check", *PAIR, *extra])
    return rc, json.loads(capsys.readouterr().out)


def test_check_stable_pair(capsys, tmp_path):
    rc, out = run_check(capsys, "--finder", "brute")
    assert rc == EXIT_OK and out["decision"] == "equivalent"
    rc, out = run_check(capsys, "--method", "wl")
    assert rc == EXIT_NOT_EQUIVALENT and out["method"] == "wl"
    rc, _ = run_check(capsys, "--method", "execution")
    assert rc == EXIT_NOT_EQUIVALENT
    rc, out = run_check(capsys)
    assert rc == EXIT_NOT_EQUIVALENT and out["reason"] == "no candidate mapping"

    m = tmp_path / "m.json"
    m.write_text(json.dumps({"x": [{"constant": 1, "variable": "y"}]}))
    rc, out = run_check(capsys, "--mapping", str(m))
    assert rc == EXIT_OK and out["mapping"] == {"x": [{"constant": 1, "variable": "y"}]}


def test_check_both_directions(capsys):
    rc, out = run_check(capsys, "--finder", "brute", "--both-directions")
    assert rc == EXIT_OK
    assert out["alpha_prime_to_alpha"]["decision"] == out["alpha_to_alpha_prime"]["decision"] == "equivalent"


def test_check_dataset_record(generated, capsys):
    d = generated / "rescale"
    rec = sorted(p for p in d.iterdir())[0]
    rc = main(["check", str(rec / "alpha.json"), str(rec / "alpha_prime.json"), str(rec / "instance.json")])
    out = json.loads(capsys.readouterr().out)
    assert rc == EXIT_OK and out["decision"] == "equivalent"


def test_check_input_errors(tmp_path, capsys):
    assert main(["check", str(tmp_path / "none.json"), *PAIR[1:]]) == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["check", str(bad), *PAIR[1:]]) == EXIT_INPUT
    assert main(["check", *PAIR, "--mapping", str(tmp_path / "gone.json")]) == EXIT_INPUT
    empty = tmp_path / "inst.json"
    empty.write_text(json.dumps({"sets": {}, "parameters": {}}))
    assert main(["check", *PAIR[:2], str(empty)]) == EXIT_INPUT
    capsys.readouterr()


def test_check_undecided(tmp_path, capsys):
    doc = json.loads((FIG / "alpha.json").read_text())
    doc["constraints"].append({"description": "", "formulation": "sum(i in V, x[i]) >= 9"})
    p = tmp_path / "alpha.json"
    p.write_text(json.dumps(doc))
    assert main(["check", str(p), *PAIR[1:], "--finder", "brute"]) == EXIT_UNDECIDED
    capsys.readouterr()


def test_bench_deterministic(generated, tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["bench", str(generated), "--report", str(a)]) == EXIT_OK
    assert main(["bench", str(generated), "--report", str(b / "report.json"), "--jobs", "2"]) == EXIT_OK
    text = capsys.readouterr().out
    assert "Worst Case" in text
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    assert (a / "report.txt").read_bytes() == (b / "report.txt").read_bytes()
    timings = json.loads((a / "report.timings.json").read_text())
    assert len(timings["records"]) == 146 * 4


def test_bench_replay(tmp_path, capsys):
    ds = tmp_path / "ds"
    assert main(["gen", "--out", str(ds), "--kinds", "base10", "loose-constraints"]) == EXIT_OK
    _, records = load_dataset(ds)
    t = write_transcript(records, tmp_path / "t.jsonl")
    args = ["bench", str(ds), "--methods", "equivamap", "naive-llm", "--finder", "llm", "--transcript", str(t)]
    assert main(args + ["--report", str(tmp_path / "r1")]) == EXIT_OK
    assert main(args + ["--report", str(tmp_path / "r2")]) == EXIT_OK
    capsys.readouterr()
    r1 = (tmp_path / "r1" / "report.json").read_bytes()
    assert r1 == (tmp_path / "r2" / "report.json").read_bytes()
    doc = json.loads(r1)
    assert doc["undecided"] == []
    assert all(r["decision"] == ("equivalent" if r["equivalent"] else "not_equivalent") for r in doc["records"])


def test_bench_missing_dataset(tmp_path, capsys):
    assert main(["bench", str(tmp_path)]) == EXIT_INPUT
    capsys.readouterr()


def test_solve(capsys):
    rc = main(["solve", str(FIG / "alpha.json"), str(FIG / "instance.json")])
    out = json.loads(capsys.readouterr().out)
    assert rc == EXIT_OK and out["status"] == "optimal" and out["objective"] == 2
