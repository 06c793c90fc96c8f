from __future__ import annotations

import hashlib
import json

import pytest

from combprob.cli import main
from combprob.document import load_measure

from tests.conftest import fixture_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def machine(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "machine")
    report = json.loads(out)
    assert report["exit_code"] == code
    return code, report


FIVE = fixture_path("five_atom_mixed_signs.txt")
FOUR = fixture_path("four_atom_balanced.txt")
COIN = fixture_path("fair_coin.json")
COIN_EMBEDDED = fixture_path("fair_coin_embedded.txt")
CORRUPTED = fixture_path("fair_coin_corrupted.txt")
OMEGA_HALF = fixture_path("omega_half.txt")
COARSE = fixture_path("coarse_three_atom.txt")
ANTIEVENT = fixture_path("antievent_certain.txt")


def test_validate_passes(capsys):
    code, out, _ = run(capsys, "validate", FIVE)
    assert code == 0 and out.rstrip().endswith("OK")


def test_validate_reports_failing_axiom(capsys):
    code, report = machine(capsys, "validate", OMEGA_HALF)
    assert code == 1 and not report["ok"]
    failing = [r for r in report["results"] if r["status"] == "fail"]
    assert [r["clause"] for r in failing] == ["CP5"]
    assert failing[0]["witness"]["events"]["A"] == "{w, -w}"


def test_validate_construction_failure_exits_one(tmp_path, capsys):
    path = tmp_path / "big.txt"
    path.write_text("atoms: a\nkind: digitalized\na = 3/2\n", encoding="utf-8")
    code, out, _ = run(capsys, "validate", path)
    assert code == 1 and "FAILED" in out


def test_validate_conventional_and_extended(capsys, tmp_path):
    assert run(capsys, "validate", COIN)[0] == 0
    ext = tmp_path / "ext.txt"
    assert run(capsys, "convert", COIN_EMBEDDED, "--target", "extended", "-o", ext)[0] == 0
    code, report = machine(capsys, "validate", ext)
    assert code == 0 and report["kind"] == "extended"
    assert [r["clause"] for r in report["results"]][:2] == ["EP1", "EP2"]


def test_eval(capsys):
    assert run(capsys, "eval", FIVE, "w,v,u")[1] == "1/5\n"
    assert run(capsys, "eval", FOUR, "u,v,w,z")[1] == "0\n"
    assert run(capsys, "eval", FIVE, "-u")[1] == "1/5\n"
    assert run(capsys, "eval", FIVE, "")[1] == "0\n"
    assert run(capsys, "eval", COIN, "h")[1] == "1/2\n"


def test_eval_errors(capsys):
    code, _, err = run(capsys, "eval", FIVE, "x")
    assert code == 2 and "unknown label" in err
    code, _, err = run(capsys, "eval", COARSE, "u")
    assert code == 1 and "not in the family" in err


def test_classify(capsys):
    code, report = machine(capsys, "classify", COARSE)
    info = report["classification"]
    assert code == 0
    assert info["positively_normalized"] and info["positive_witness"] == "{u, v, w}"
    assert info["positive_mass"] == "1/3" and not info["digitalized"]
    code, out, _ = run(capsys, "classify", COIN_EMBEDDED)
    assert code == 0 and "positively complete: yes (p(Omega_+p) = 1)" in out
    assert run(capsys, "classify", OMEGA_HALF)[0] == 1
    assert run(capsys, "classify", COIN)[0] == 2


def test_convert_to_conventional_cites_algebra_failure(capsys):
    code, report = machine(capsys, "convert", FIVE, "--target", "conventional")
    assert code == 1
    assert report["failure"]["hypothesis"] == "algebra"
    assert "{u}" in report["failure"]["witness"]["events"].values()


def test_convert_to_extended_cites_sign_alignment(capsys):
    code, out, _ = run(capsys, "convert", ANTIEVENT, "--target", "extended")
    assert code == 1
    assert "violated hypothesis: sign-alignment (target axiom EP8)" in out


def test_convert_writes_a_valid_document(tmp_path, capsys):
    for suffix in (".txt", ".json"):
        target = tmp_path / f"coin{suffix}"
        code, out, _ = run(capsys, "convert", COIN, "--target", "combined", "-o", target)
        assert code == 0 and "wrote" in out
        assert run(capsys, "validate", target)[0] == 0
        m = load_measure(target.read_text(encoding="utf-8"))
        assert m.is_digitalized
    back = tmp_path / "back.json"
    assert run(capsys, "convert", tmp_path / "coin.txt", "--target", "conventional", "-o", back)[0] == 0
    assert load_measure(back.read_text(encoding="utf-8")).values == load_measure(COIN.read_text()).values


def test_check_file(capsys):
    code, out, _ = run(capsys, "check", FIVE)
    assert code == 0
    assert "flagged (not counted): Lemma 2.7, Lemma 2.11, Proposition 2.7, Corollary 2.13" in out


def test_check_corrupted_exits_one(capsys):
    code, report = machine(capsys, "check", CORRUPTED)
    assert code == 1
    failed = {r["clause"] for r in report["results"] if r["status"] == "fail"}
    assert {"CP3", "CP5", "Lemma 2.2", "Proposition 2.8"} <= failed


def test_check_sweep(capsys):
    code, report = machine(capsys, "check", "--sweep", 2, "-1/2,0,1/2")
    assert code == 0
    assert report["summary"]["failures"] == []
    code, out, _ = run(capsys, "check", "--sweep", 3, "−1/4,0,1/4")
    assert code == 0 and "failures: 0" in out


@pytest.mark.parametrize("argv", [
    ["check", "--sweep", "2", "0,1/2"],
    ["check", "--sweep", "x", "0"],
    ["check", "--sweep", "9", "0"],
    ["check"],
    ["check", FIVE, "--sweep", "1", "0"],
    ["convert", FIVE],
    ["frobnicate"],
    ["validate", FIVE, "--max-atoms", "4"],
    ["validate", FIVE, "--max-atoms", "0"],
])
def test_usage_errors_exit_two(capsys, argv):
    with pytest.raises(SystemExit) as info:
        raise SystemExit(main([str(a) for a in argv]))
    assert info.value.code == 2
    capsys.readouterr()


def test_malformed_input_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("atoms: a\nkind: digitalized\na = 1/0\n", encoding="utf-8")
    code, _, err = run(capsys, "validate", path)
    assert code == 2 and "line 3" in err


def test_missing_file_exits_three(tmp_path, capsys):
    code, _, err = run(capsys, "validate", tmp_path / "absent.txt")
    assert code == 3 and "cannot read" in err


def test_unwritable_output_exits_three(tmp_path, capsys):
    code, _, _ = run(capsys, "convert", COIN, "--target", "combined", "-o", tmp_path / "no" / "x.txt")
    assert code == 3


def test_machine_output_is_deterministic(capsys):
    first = run(capsys, "check", FIVE, "--format", "machine")[1]
    second = run(capsys, "check", FIVE, "--format", "machine")[1]
    assert first == second
    report = json.loads(first)
    assert report["input"]["sha256"] == hashlib.sha256(FIVE.read_bytes()).hexdigest()
    assert set(report) == {"tool", "version", "command", "input", "ok", "results", "exit_code"}
