import io
import json
import subprocess
import sys

import jsonschema
import pytest

from quiverext.cli import dump_report, run

from conftest import ROOT, fixture_path

SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())


def fx(name):
    return str(fixture_path(name))


def invoke(*argv):
    out = io.StringIO()
    code, rep = run(list(argv), out)
    if rep:
        jsonschema.validate(rep, SCHEMA)
    return code, rep, out.getvalue()


def test_classify_examples():
    code, rep, text = invoke("classify", fx("diamond_ba.quiver"))
    assert code == 0 and "DerivedDiscrete(GentleOneCycleClock)" in text
    assert (rep["verdicts"]["clock"]["clockwise"], rep["verdicts"]["clock"]["counterclockwise"]) == (1, 0)
    code, rep, _ = invoke("classify", fx("diamond_ba_dc.quiver"))
    assert code == 2 and rep["verdicts"]["classification"]["status"] == "NotDerivedDiscrete"
    code, _, text = invoke("classify", fx("empty.quiver"))
    assert code == 0 and "HereditaryDynkin(A1)" in text


def test_witness_separable_quotient():
    code, rep, text = invoke("witness", "separable", "--quotient", fx("diamond_ba.quiver"), "--add", "d*c")
    assert code == 0 and rep["verdicts"]["separableVerified"]
    assert "re-verified" in text and rep["certificates"]["separabilityIdempotent"]["terms"]


def test_witness_negative_exit_code():
    code, rep, _ = invoke("witness", "projective", "--quotient", fx("diamond_ba.quiver"), "--add", "d*c")
    assert code == 2 and rep["verdicts"]["rightProjective"]["projective"] is False
    code, rep, _ = invoke("witness", "separable", "--skew", fx("empty_f2.quiver"), "--trivial-group", "2")
    assert code == 2 and rep["verdicts"]["separable"] is False
    assert rep["caveats"]


def test_validate():
    assert invoke("validate", fx("diamond_ba.quiver"))[0] == 0
    code, rep, _ = invoke("validate", fx("free_loop.quiver"))
    assert code == 2 and rep["verdicts"]["admissible"] is False
    code, rep, text = invoke("validate", fx("diamond_bc.quiver"))
    assert code == 1 and rep["verdicts"]["error"]["type"] == "NonComposablePath"
    assert "NonComposablePath" in text


def test_global_flags_before_or_after_subcommand(tmp_path):
    before, after = tmp_path / "before.json", tmp_path / "after.json"
    invoke("--json", str(before), "--seed", "5", "classify", fx("diamond.quiver"))
    invoke("classify", fx("diamond.quiver"), "--json", str(after), "--seed", "7")
    assert json.loads(before.read_text())["seed"] == 5
    assert json.loads(after.read_text())["seed"] == 7


def test_usage_errors():
    assert invoke("complex", "nonsense", fx("diamond_ba.quiver"))[0] == 1
    code, rep, _ = invoke("witness", "split")
    assert code == 1 and rep["verdicts"]["error"]["type"] == "UsageError"
    code, rep, _ = invoke("classify", str(ROOT / "no_such_file.quiver"))
    assert code == 1 and rep["verdicts"]["error"]["type"] == "FileNotFoundError"


def test_extend_and_experiment():
    code, rep, _ = invoke("extend", "base-change", fx("diamond_ba.quiver"), "--field", "Q[x]/(x^2-2)")
    assert code == 0 and rep["verdicts"]["extension"]["dimB"] == 18
    code, rep, _ = invoke("experiment", "theorem41", "--base-change", fx("diamond_ba.quiver"),
                          "--field", "Q[x]/(x^2-2)")
    assert code == 0 and rep["verdicts"]["outcome"] == "CONSISTENT"


def test_complex_commands():
    alg = fx("diamond_ba.quiver")
    code, rep, _ = invoke("complex", "minimize", alg, "--complex", fx("cone_p1.json"))
    assert code == 0 and rep["verdicts"]["output"]["componentDims"] == {}
    code, rep, _ = invoke("complex", "resolve", alg, "--module", "simple:2", "--depth", "3")
    assert rep["verdicts"]["resolution"]["complex"]["terms"] == {"-1": ["4"], "0": ["2"]}
    code, rep, _ = invoke("complex", "bound", alg, "--coh=0:1", "--at", "-1", "--module", "simple:1")
    assert code == 0 and rep["verdicts"]["bound"] == {"-1": 16, "0": 4} and rep["verdicts"]["withinBound"]
    code, rep, _ = invoke("complex", "truncate", alg, "--complex", fx("three_term.json"), "--at", "0", "--good")
    assert rep["verdicts"]["goodTruncation"]["cohomologyDims"] == {"0": 1}
    code, rep, _ = invoke("complex", "sample", fx("diamond_ba_f2.quiver"), "--cdim=-1:1,0:2", "--radical-only")
    assert code == 0 and rep["verdicts"]["sample"]["isoClassCount"] == 5
    assert any("infinite field" in c for c in rep["caveats"])
    code, rep, _ = invoke("complex", "roundtrip", fx("diamond_ba_f3.quiver"), "--module", "simple:1",
                          "--other", fx("rep_s1_f3.json"), "--at", "-1")
    assert code == 0 and rep["verdicts"]["roundtrip"]["modulesIsomorphic"] is True


@pytest.mark.parametrize("argv", [
    ["classify", "diamond_ba.quiver"],
    ["experiment", "prop53", "--skew", "diamond_ba.quiver", "--trivial-group", "2"],
    ["complex", "sample", "diamond_ba_f3.quiver", "--cdim=-1:1,0:2", "--radical-only"],
])
def test_reports_are_byte_identical(tmp_path, argv):
    argv = [fx(a) if a.endswith(".quiver") else a for a in argv]
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    run(argv + ["--json", str(first), "--seed", "7"], io.StringIO())
    run(argv + ["--json", str(second), "--seed", "7"], io.StringIO())
    assert first.read_bytes() == second.read_bytes()
    rep = json.loads(first.read_text())
    jsonschema.validate(rep, SCHEMA)
    assert dump_report(rep) == first.read_text()
    assert rep["seed"] == 7 and len(rep["inputs"][0]["sha256"]) == 64


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quiverext", "classify", fx("diamond_ba.quiver")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "GentleOneCycleClock" in proc.stdout
