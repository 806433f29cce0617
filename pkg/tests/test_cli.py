import json
import subprocess
import sys

import pytest

from conftest import DATA
from folwfs.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_wfs_ex3(capsys):
    code, out, _ = run(capsys, "wfs", str(DATA / "ex3.folkb"))
    assert code == 0
    assert out.strip() == "true: R(a); false: A(a), B(a); undefined: (none)"


def test_wfs_ex2_inconsistent(capsys):
    code, out, _ = run(capsys, "wfs", str(DATA / "ex2.folkb"))
    assert code == 2 and "INCONSISTENT" in out


def test_wfs_trace_and_json(capsys):
    code, out, _ = run(capsys, "wfs", str(DATA / "ex2.folkb"), "--trace")
    assert out.splitlines()[:3] == ["W^0 = {}", "W^1 = {~A(a), ~B(a)}", "W^2 = {~A(a), A(a), ~B(a)}"]
    code, out, _ = run(capsys, "wfs", str(DATA / "ex3.folkb"), "--json")
    obj = json.loads(out)
    assert obj["atoms"] == {"A(a)": "false", "B(a)": "false", "R(a)": "true"}
    assert obj["inconsistent"] is False and obj["iterations"] == len(obj["trace"]) - 1


def test_missing_file_and_parse_error(capsys, tmp_path):
    code, _, err = run(capsys, "wfs", str(tmp_path / "missing.folkb"))
    assert code == 1 and "missing.folkb" in err
    bad = tmp_path / "bad.folkb"
    bad.write_text("#constants a.\n#rules\np(a) :- q(b).\n")
    code, _, err = run(capsys, "wfs", str(bad))
    assert code == 1 and "bad.folkb:3:" in err


def test_usage_error_is_not_confused_with_inconsistency(capsys):
    with pytest.raises(SystemExit) as info:
        main(["wfs"])
    assert info.value.code == 1


def test_resource_cap_exit_code(capsys, tmp_path):
    names = [f"P{k}" for k in range(4)]
    kb = tmp_path / "wide.folkb"
    kb.write_text("#constants a.\n#omega " + ", ".join(names) + ".\n#theory\n" + " | ".join(f"{n}(a)" for n in names)
                  + ".\n#rules\nq(a) :- not P0(a).\n")
    code, _, err = run(capsys, "wfs", str(kb), "--max-extension-atoms", "2")
    assert code == 3 and "resource limit" in err
    code, _, err = run(capsys, "answersets", str(DATA / "grounding.folkb"), "--max-enum-atoms", "3")
    assert code == 3


def test_answersets(capsys):
    code, out, _ = run(capsys, "answersets", str(DATA / "ex3.folkb"))
    assert code == 0 and out.strip() == "{R(a)}"
    code, out, _ = run(capsys, "answersets", str(DATA / "ex2.folkb"))
    assert out.strip() == "no answer sets"
    code, out, _ = run(capsys, "answersets", str(DATA / "ex2.folkb"), "--check", "B(a)")
    assert out.strip() == "not an answer set"
    code, out, _ = run(capsys, "answersets", str(DATA / "ex3.folkb"), "--check", "R(a)", "--json")
    assert json.loads(out) == {"interpretation": ["R(a)"], "answer_set": True}


def test_entail(capsys):
    assert run(capsys, "entail", str(DATA / "intro.folkb"), "~A(a)")[1].strip() == "true"
    assert run(capsys, "entail", str(DATA / "ex3.folkb"), "P(a) | ~P(a)")[1].strip() == "true"
    assert run(capsys, "entail", str(DATA / "ex3.folkb"), "C(a)", "--assume", "A(a)")[1].strip() == "true"
    assert run(capsys, "entail", str(DATA / "ex3.folkb"), "C(a)")[1].strip() == "false"
    code, _, err = run(capsys, "entail", str(DATA / "ex3.folkb"), "C(zz)")
    assert code == 1 and "undeclared constant" in err


def test_dump_cnf(capsys, tmp_path):
    code, _, _ = run(capsys, "wfs", str(DATA / "ex3.folkb"), "--dump-cnf", str(tmp_path / "cnf"))
    files = sorted((tmp_path / "cnf").glob("*.cnf"))
    assert code == 0 and files and files[0].read_text().count("p cnf") == 1


def test_output_is_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "folwfs.cli", "wfs", str(DATA / "quantified.folkb"), "--json", "--trace"]
    outs = {subprocess.run(cmd, capture_output=True, text=True, check=True).stdout for _ in range(2)}
    assert len(outs) == 1
