import io
import json
import subprocess
import sys

import pytest

from localmoufang.cli import dumps, loads, run


def invoke(*argv):
    out = io.StringIO()
    code, report = run(list(argv), out=out)
    return code, report, out.getvalue()


def test_verify_projective_z9():
    code, report, text = invoke("verify", "moufang", "--ring", "zmod:9", "--family", "projective")
    assert code == 0
    assert [s for s in dict.fromkeys(c["suite"] for c in report["checks"])] == \
        ["axioms", "mu", "hua", "sumform", "quasi-inverse"]
    assert report["summary"]["fail"] == 0
    assert "0 failed" in text


def test_reconstruct_z4_fails_at_r4():
    code, report, _ = invoke("verify", "moufang", "--ring", "zmod:4", "--suite", "reconstruct-ring")
    assert code == 1
    failed = [c for c in report["checks"] if c["status"] == "fail"]
    assert len(failed) == 1 and failed[0]["name"].startswith("R4")
    assert failed[0]["witness"] is not None


def test_tree_json_file(tmp_path):
    path = tmp_path / "out.json"
    code, _, _ = invoke("tree", "verify-iso", "--p", "3", "--level", "2", "--json", str(path))
    assert code == 0
    report = json.loads(path.read_text())
    assert report["schema"] == 1
    assert all(c["status"] == "pass" for c in report["checks"])


def test_descriptor_error_exit_code():
    code, report, _ = invoke("ring", "info", "zmod:6")
    assert code == 2 and report["error"]["kind"] == "descriptor"
    code, _, _ = invoke("ring", "info", "nonsense")
    assert code == 2


def test_bad_grammar_exit_code():
    code, _, _ = invoke("projective", "explode", "--ring", "zmod:9")
    assert code == 2


def test_cap_exit_code():
    code, report, _ = invoke("jordan", "axioms", "--pair", "qform:zmod:25:x1^2+2x2^2")
    assert code == 3 and report["error"]["kind"] == "cap"
    code, _, _ = invoke("ring", "info", "zmod:81", "--cap", "27")
    assert code == 3


def test_isotropic_form_report():
    code, report, _ = invoke("orthogonal", "build", "--ring", "zmod:5", "--form", "x1^2+x2^2")
    assert code == 1
    fail = next(c for c in report["checks"] if c["status"] == "fail")
    assert fail["witness"] == "(2,1)"


def test_fail_records_carry_witness():
    _, report, _ = invoke("verify", "moufang", "--ring", "zmod:4", "--suite", "reconstruct-ring")
    assert all(c["witness"] is not None for c in report["checks"] if c["status"] == "fail")


def test_json_round_trip():
    _, report, _ = invoke("projective", "build", "--ring", "zmod:9")
    text = dumps(report)
    assert dumps(loads(text)) == text


def test_sampled_status_is_deterministic():
    _, a, _ = invoke("ring", "info", "zmod:125", "--seed", "3")
    _, b, _ = invoke("ring", "info", "zmod:125", "--seed", "3")
    assert any(c["status"] == "sampled" for c in a["checks"])
    assert dumps(a) == dumps(b)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "localmoufang", "ring", "info", "zmod:9", "--quiet"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "0 failed" in proc.stdout
