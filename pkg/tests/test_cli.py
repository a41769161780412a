import pytest

from surfcommit.algebra.field import GF
from surfcommit.algebra.mpoly import HomogPoly
from surfcommit.cli import main
from surfcommit.surface import Surface


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    pairs = [line.split("=", 1) for line in out.splitlines()]
    return code, out, dict(p for p in pairs if len(p) == 2)


def test_params_check_golden(capsys):
    code, out, kv = run(capsys, "params-check", "--q", "7", "--d", "4", "--m", "3")
    assert code == 0
    assert out.splitlines()[:4] == ["q=7", "d=4", "m=3", "criterion=holds_by_nonintegrality"]
    assert kv["check.parity"] == "ok (d even)"
    assert kv["check.nullspace"] == "ok (C(d+3,3) - (dm+1) = 22)"
    assert out.splitlines()[-1] == "result=pass"
    code, _, kv = run(capsys, "params-check", "--q", "7", "--d", "4", "--m", "8")
    assert code == 1 and kv["criterion"] == "fails"


def test_commit_reveal_roundtrip(capsys, tmp_path):
    msg = tmp_path / "msg.bin"
    msg.write_bytes(b"hi")
    com, op = tmp_path / "c.txt", tmp_path / "o.txt"
    code, _, kv = run(
        capsys, "commit", "--q", "7", "--d", "4", "--m", "3", "--msg-file", str(msg),
        "--seed", "s1", "--out", str(com), "--opening", str(op),
    )
    assert code == 0 and kv["result"] == "pass" and len(kv["certificate"]) == 64
    code, _, kv = run(capsys, "reveal", "--commitment", str(com), "--opening", str(op))
    assert code == 0 and kv["result"] == "accept"

    lines = com.read_text().split("\n")
    coeffs = lines[1].split(" ")
    coeffs[-1] = str((int(coeffs[-1]) + 1) % 7)
    lines[1] = " ".join(coeffs)
    com.write_text("\n".join(lines))
    code, _, kv = run(capsys, "reveal", "--commitment", str(com), "--opening", str(op))
    assert code == 1 and kv["result"] == "reject"


def test_surface_tools(capsys, tmp_path):
    path = tmp_path / "cone.txt"
    cone = Surface(HomogPoly(GF(3), 2, {(1, 1, 0, 0): 1, (0, 0, 2, 0): 2}))
    path.write_text(cone.serialize())
    code, _, kv = run(capsys, "inspect-surface", "--in", str(path))
    assert code == 1 and kv["status"] == "singular"
    assert kv["witness"] == "(0:0:0:1) over F_3^1"

    counts = tmp_path / "n.txt"
    code, _, kv = run(capsys, "count-points", "--in", str(path), "--max-ext", "2", "--out", str(counts))
    assert code == 0 and kv["N1"] == "13" and kv["N2"] == "91"
    code, _, kv = run(capsys, "picard-bound", "--counts-file", str(counts), "--d", "2", "--q", "3")
    assert kv["b2"] == "2"
    code, _, kv = run(capsys, "attack-bruteforce", "--surface", str(path), "--m", "1", "--budget", "100")
    assert code == 2 and kv["error"].startswith("CapacityExceeded")


def test_picard_bound_needs_counts(capsys, tmp_path):
    counts = tmp_path / "n.txt"
    counts.write_text("1 5\n2 17\n3 65\n")
    code, _, kv = run(capsys, "picard-bound", "--counts-file", str(counts), "--d", "4", "--q", "2")
    assert code == 2 and kv["error"].startswith("InsufficientData")


def test_funcfield_commands(capsys, tmp_path):
    code, _, kv = run(capsys, "ff-injectivity", "--p", "5", "--m", "2", "--deg-bound", "1", "--show", "1")
    assert code == 1 and kv["pairs_scanned"] == "625"
    code, _, kv = run(capsys, "ff-frobenius-demo", "--p", "2", "--x", "0,1", "--y", "1")
    assert code == 0 and kv["q"] == "4096" and kv["distinct"] == "true"
    assert kv["k"] == "0,1" + ",0" * 11 + ",1"
    code, _, kv = run(capsys, "zagier-search", "--height", "5")
    assert code == 0 and kv["collisions"] == "0" and kv["rationals"] == "39"
    inst = tmp_path / "i.txt"
    inst.write_text("p=5\nu=0,1/1\nu=1,4/1\n")
    code, _, kv = run(capsys, "sunit-check", "--file", str(inst))
    assert code == 0 and kv["verdict"] == "holds" and kv["S_size"] == "3"


def test_errors_exit_two(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
    code, _, kv = run(capsys, "reveal", "--commitment", str(tmp_path / "x"), "--opening", str(tmp_path / "y"))
    assert code == 2 and "error" in kv
