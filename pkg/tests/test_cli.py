import json
import subprocess
import sys

from modalbhk.cli import main
from modalbhk.fixtures import bundled_fixture_dir


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_valid_passes_for_proof_decides(capsys):
    code, out, _ = run(capsys, "valid?", "L5", "[]([]x | ~[]x)")
    assert code == 0 and "pass" in out


def test_valid_finds_countermodel(capsys):
    code, out, _ = run(capsys, "valid", "--logic", "L5", "x -> []x", "--json")
    assert code == 1
    data = json.loads(out)
    assert data["verdict"] == "fail" and data["countermodel"]["assignment"] == {"x": 1}


def test_solve_eq_liar(capsys):
    code, out, _ = run(capsys, "solve-eq", "L5", "x", "x", "x -> _|_")
    assert code == 1 and "unsatisfiable everywhere" in out


def test_prove_ipc(capsys, tmp_path):
    target = tmp_path / "cm.json"
    code, out, _ = run(capsys, "prove-ipc", "((p->q)->p)->p", "--countermodel-out", str(target))
    assert code == 1 and "NonTheorem" in out
    assert json.loads(target.read_text())["worlds"] == 2
    code, out, _ = run(capsys, "prove-ipc", "p -> p")
    assert code == 0 and "Theorem" in out


def test_axiom_query(capsys):
    assert run(capsys, "axiom?", "L3", "[](x | y) -> []x | []y")[0] == 0
    assert run(capsys, "axiom?", "L5", "x | ~x")[0] == 1


def test_check_all_fixtures(capsys):
    code, out, _ = run(capsys, "check-derivation", "--all", "--json")
    data = json.loads(out)
    assert code == 0 and data["ok"] and len(data["results"]) >= 15


def test_check_single_fixture_rejected(capsys):
    code, out, _ = run(capsys, "check-derivation", "an_on_tnd")
    assert code == 1 and "AN on theorem scheme" in out


def test_check_derivation_syntax_error_location(capsys, tmp_path):
    bad = tmp_path / "bad.drv"
    bad.write_text("logic: L5\n1. x -> x ; ax:INT\n2. x -> ; MP 1 1\n")
    code, _, err = run(capsys, "check-derivation", str(bad))
    assert code == 2 and ":3:" in err


def test_fixture_dir_flag(capsys, tmp_path):
    from modalbhk.fixtures import write_fixture_files
    write_fixture_files(tmp_path)
    code, _, _ = run(capsys, "check-derivation", "--all", "--fixture-dir", str(tmp_path))
    assert code == 0


def test_usage_errors(capsys):
    assert run(capsys, "valid?", "L5", "x ->")[0] == 2
    assert run(capsys, "valid?", "NOPE", "x")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "enumerate", "frames", "L3", "2")[0] == 2


def test_enumerate_and_bridge_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "models", "EL5", "3", "--json")
    assert code == 0
    lines = out.strip().splitlines()
    model = tmp_path / "m.json"
    model.write_text(lines[-1])
    frame = tmp_path / "f.json"
    assert run(capsys, "bridge", str(model), "-o", str(frame))[0] == 0
    code, out, _ = run(capsys, "bridge", str(frame))
    assert code == 0
    assert json.loads(out)["size"] == json.loads(lines[-1])["size"]


def test_enumerate_counts(capsys):
    code, out, _ = run(capsys, "enumerate", "frames", "EL5", "3")
    assert code == 0 and out.startswith("27 frames")


def test_lift(capsys, tmp_path):
    src = bundled_fixture_dir() / "src_modus_ponens.drv"
    code, out, _ = run(capsys, "lift", str(src), "--json")
    data = json.loads(out)
    assert code == 0 and data["accepted"]
    code, out, _ = run(capsys, "lift", str(bundled_fixture_dir() / "src_coreflect_hyp.drv"), "--target", "EL5star")
    assert code == 0


def test_consequence(capsys):
    assert run(capsys, "consequence?", "L5", "x", "--hyp", "[]x")[0] == 0
    assert run(capsys, "consequence?", "L5", "[]x", "--hyp", "x")[0] == 1


def test_reproduce_single(capsys):
    code, out, _ = run(capsys, "reproduce", "9", "--seed", "3")
    assert code == 0 and out.startswith("[PASS] 9.")
    assert run(capsys, "reproduce", "12")[0] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "modalbhk", "valid?", "L5", "x -> <>x"], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
