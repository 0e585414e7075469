import io
import json
import subprocess
import sys

import pytest

from ppsym.cli import main, read_config

S4_5I = "[u^2, -(13/10)*ln(u) + r^2/2, u*y, u*z]"
SB = "(y*sin(u/2) - z*cos(u/2))"
TB = "(y*cos(u/2) + z*sin(u/2))"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_verify_unknown_class():
    code, _, err = run("verify", "--class", "nosuch")
    assert code == 2
    assert "unknown class" in err


def test_verify_6i_text_report():
    code, out, _ = run("verify", "--class", "6i", "--seed", "42")
    assert code == 1  # amendments present
    lines = [ln for ln in out.splitlines() if "wave-psi" in ln]
    assert any("C4" in ln and ln.startswith("PASS") for ln in lines)
    assert any("C5" in ln and ln.startswith("PASS") for ln in lines)
    assert run("verify", "--class", "6i", "--accept-amended")[0] == 0


def test_verify_json_to_file(tmp_path):
    path = tmp_path / "out.json"
    code, _, _ = run("verify", "--class", "1", "--class", "7", "--json", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert {c["class_id"] for c in doc["claims"]} == {"1", "7"}
    assert doc["summary"]["fail"] == 0


def test_classify_killing():
    code, out, _ = run("classify", "--H", "0", "--xi", "[0,1,0,0]")
    assert code == 0
    assert "verdict: Killing" in out
    assert "psi: 0" in out


def test_classify_special_conformal():
    code, out, _ = run("classify", "--H", "zeta*ln(r)/u^2", "--xi", S4_5I)
    assert code == 0
    assert "verdict: SpecialConformal" in out
    assert "psi: u" in out


def test_classify_needs_four_components():
    assert run("classify", "--H", "0", "--xi", "[u,0,0]")[0] == 2


def test_classify_parse_error():
    assert run("classify", "--H", "u +* y", "--xi", "[0,1,0,0]")[0] == 2


def test_kg_check_class_4():
    H = f"ln(1 + {SB}^2) + {TB}^2"
    V = f"sin(v - u/2) + {SB}*{TB}"
    code, out, _ = run("kg-check", "--H", H, "--xi", "[2, 1, -z, y]", "--V", V)
    assert code == 0
    assert "kg: PASS" in out


def test_kg_check_perturbed_potential():
    code, out, _ = run("kg-check", "--H", "0", "--xi", "[0,1,0,0]", "--V", "y + v/10")
    assert code == 1
    assert "value=0.1" in out


def test_kg_check_noether_6ii():
    # S5 of class 6ii with a potential built from its invariants r/u and v - r^2/(2u)
    V = "(sin(r/u) + v - r^2/(2*u))/u^2"
    code, out, _ = run("kg-check", "--H", "K/r^2", "--xi", "[u^2, r^2/2, u*y, u*z]", "--V", V, "--noether")
    assert code == 0, out
    assert "noether-condition: PASS" in out
    assert "noether-divergence: PASS" in out


def test_numeric_failure_exit_code():
    code, _, err = run("kg-check", "--H", "0", "--xi", "[0,0,1,0]", "--V", "y*ln(y - 5)")
    assert code == 3
    assert "numeric failure" in err


def test_commutators_prints_constants():
    code, out, _ = run("commutators", "--class", "1i")
    assert code == 0
    assert "[X2,X3]" in out


def test_export_catalog():
    code, out, _ = run("export-catalog")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["classes"]) == 32


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("command = verify\nclass = 1\nclass = 1i\nseed = 7\n")
    code, out, _ = run("--config", str(cfg))
    assert code == 1  # 1i carries an amended count
    assert "summary:" in out


def test_config_rejects_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    with pytest.raises(Exception):
        read_config(str(cfg))
    assert run("--config", str(cfg))[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ppsym", "verify", "--class", "nosuch"], capture_output=True)
    assert proc.returncode == 2
