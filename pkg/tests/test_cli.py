import json
import subprocess
import sys

import pytest

from modalcut import show
from modalcut.analysis import gen_typed
from modalcut.cli import LAFONT, run

BETA = r"(\%v:X. ret %v) %w"


def test_normalize_vc_chain():
    code, out = run(["normalize", "--calculus", "vc", "-e", BETA])
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 4 and lines[-1].endswith("] ret %w")
    assert [l.split("[")[1].split(" @")[0] for l in lines[1:]] == ["beta", "sigma", "eta-mu"]


def test_normalize_json_schema():
    code, out = run(["normalize", "-c", "vc", "-e", BETA, "--json"])
    data = json.loads(out)
    assert code == 0
    assert set(data) == {"calculus", "start", "steps"}
    assert data["steps"][-1] == {"rule": "eta-mu", "path": [], "result": "ret %w"}


def test_demo_lafont():
    code, out = run(["demo", "lafont"])
    assert code == 0
    assert "< y | @b >" in out and "< z | @b >" in out
    assert "non-confluent" in out


def test_demo_lafont_json():
    code, out = run(["demo", "lafont", "--json"])
    data = json.loads(out)
    assert code == 0 and data["as_expected"] and data["expression"] == LAFONT


def test_confluence_on_generated_vn_term():
    s = gen_typed("lmmt-vn", 8, 11)
    code, out = run(["confluence", "--calculus", "lmmt-vn", "--bound", "10000",
                     "-e", show(s.subject)])
    assert code == 0 and "verdict: confluent" in out


def test_confluence_failure_exit_code():
    code, out = run(["confluence", "-c", "lmmt", "-e", LAFONT, "--json"])
    data = json.loads(out)
    assert code == 1 and data["verdict"] == "non-confluent"
    assert len(data["witnesses"]) == 2
    assert {w["steps"][-1]["result"] for w in data["witnesses"]} == {"< y | @b >", "< z | @b >"}
    assert set(data["witnesses"][0]) == {"calculus", "start", "steps"}


def test_confluence_in_fragment():
    code, out = run(["confluence", "-c", "lmmt", "--fragment", "cbn", "-e", LAFONT])
    assert code == 0 and "< z | @b >" in out


def test_graph_json_schema():
    code, out = run(["graph", "-c", "lmmt", "-e", LAFONT, "--json"])
    data = json.loads(out)
    assert code == 0
    assert {"calculus", "start", "steps", "nodes", "edges", "normal_forms", "exhausted"} == set(data)
    assert sorted(data["normal_forms"]) == ["< y | @b >", "< z | @b >"]


def test_check_prints_derivation():
    code, out = run(["check", "-c", "vc", "-e", "ret %w", "--gamma", "%w:X", "--type", "M X"])
    assert code == 0 and "[ret] ret %w : M X" in out and "[Axv]" in out


def test_check_type_error():
    code, out = run(["check", "-c", "vc", "-e", "ret %w", "--type", "M X"])
    assert code == 1 and "unbound" in out


def test_parse_errors_have_positions():
    code, out = run(["check", "-c", "vc", "-e", "let #p = %w in %w"])
    assert code == 2 and out.startswith("error: 1:5:")
    code, out = run(["check", "-c", "vc", "-e", "ret (%w"])
    assert code == 2 and out.startswith("error:")


def test_usage_errors():
    assert run(["bogus"])[0] == 2
    assert run(["normalize", "-c", "nowhere", "-e", "x"])[0] == 2
    assert run([])[0] == 2


def test_step_at_path():
    code, out = run(["step", "-c", "vc", "-e", "mu @b. let %v:X = ret %w in @b (ret %v)",
                     "--path", "0", "--rule", "sigma"])
    assert code == 0 and "mu @b. @b (ret %w)" in out
    code, out = run(["step", "-c", "vc", "-e", "ret %w", "--rule", "beta"])
    assert code == 2


def test_translate():
    code, out = run(["translate", "-c", "vc", "--to", "cm", "-e", "sub #p = ret %w in @a #p"])
    assert code == 0 and r"(\#p. #p (\x1. @a x1)) (\k2. k2 %w)" in out
    code, out = run(["translate", "-c", "lmmt-vn", "--to", "monadic", "-e", "%v"])
    assert code == 0 and "ret %v" in out
    assert run(["translate", "-c", "stlc", "--to", "cm", "-e", "x"])[0] == 2


def test_translate_emit_type():
    code, out = run(["translate", "-c", "vc", "--to", "cm", "-e", "ret %w",
                     "--gamma", "%w:X", "--type", "M X", "--emit-type"])
    assert code == 0 and "(X -> Bot) -> Bot" in out


def test_simulate():
    code, out = run(["simulate", "-c", "vc", "--to", "cm", "-e", BETA])
    assert code == 0 and "simulation-ok" in out
    code, out = run(["simulate", "-c", "lmmt-vn", "--to", "cps", "-e", "mu @a. < #n | @a >"])
    assert code == 0


def test_sr():
    code, out = run(["sr", "-c", "lmmt", "-e", LAFONT, "--gamma", "y:X, z:X", "--delta", "@b:X"])
    assert code == 0 and "sr-ok" in out
    # an ill-typed subject violates the precondition
    code, out = run(["sr", "-c", "lmmt", "-e", LAFONT])
    assert code == 2 and "unbound" in out


def test_gen_is_seeded(monkeypatch):
    a = run(["gen", "-c", "vc", "--seed", "4"])
    b = run(["gen", "-c", "vc", "--seed", "4"])
    assert a == b and a[0] == 0
    monkeypatch.setenv("MODALCUT_SEED", "4")
    assert run(["gen", "-c", "vc"]) == a
    monkeypatch.setenv("MODALCUT_SEED", "junk")
    assert run(["gen", "-c", "vc"])[0] == 2


def test_gen_output_parses_back():
    code, out = run(["gen", "-c", "lmmt-vn", "--seed", "2", "--json"])
    data = json.loads(out)
    decl = lambda d: ", ".join(f"{k}:{v}" for k, v in d.items())
    code2, _ = run(["check", "-c", "lmmt-vn", "-e", data["subject"], "--gamma", decl(data["gamma"]),
                    "--delta", decl(data["delta"])] + (["--type", data["type"]] if data["type"] else []))
    assert code == 0 and code2 == 0


def test_file_input_is_not_modified(tmp_path):
    f = tmp_path / "beta.vc"
    f.write_text(BETA + "\n")
    before = f.read_bytes()
    code, out = run(["normalize", "-c", "vc", str(f)])
    assert code == 0 and out.splitlines()[-1].endswith("ret %w")
    assert f.read_bytes() == before


def test_stdin_and_entry_point():
    proc = subprocess.run([sys.executable, "-m", "modalcut", "normalize", "-c", "vc"],
                          input=BETA, capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip().endswith("ret %w")
    proc = subprocess.run([sys.executable, "-m", "modalcut", "check", "-c", "vc", "-e", "(("],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stderr.startswith("error:")
