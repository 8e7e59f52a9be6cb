import json
import pathlib
import subprocess
import sys

CLI = [sys.executable, "-m", "qpel.cli"]


def run(*args, cwd=None):
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, cwd=cwd or pathlib.Path.cwd()
    )


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_check_corpus_verified_stochastic():
    out = run("check", "--verify", "stochastic", "corpus/core.qpel")
    assert out.returncode == 0, out.stdout + out.stderr


def test_check_all_backends_with_skips():
    out = run("check", "--verify", "all", "corpus/qubit.qpel")
    assert out.returncode == 0
    assert "set=skipped" in out.stdout  # explicit skip, not silent success


def test_linearity_violation_exits_3(tmp_path):
    p = write(tmp_path, "bad.qpel", "term dup (x : I) : I * I = x * x\n")
    out = run("check", p)
    assert out.returncode == 3
    assert "no cloning" in out.stdout


def test_wrong_rule_name_exits_4(tmp_path):
    p = write(
        tmp_path, "bad.qpel",
        "lemma l (x : I) : x = x : I by { sym(sym(sym(measure-1))) }\n",
    )
    out = run("check", p)
    assert out.returncode == 4


def test_parse_error_exits_2(tmp_path):
    p = write(tmp_path, "bad.qpel", "term ( : I = unit\n")
    out = run("check", p)
    assert out.returncode == 2


def test_semantic_mismatch_exits_5(tmp_path):
    # an unsound extra lemma cannot be derived, so fabricate a file whose
    # lemma checks but whose verification is falsified only by a broken
    # claim: use a use-free lemma with auto and a deliberately false goal
    # that is still derivable? none exists (soundness); instead check the
    # plumbing with a crafted report through the driver API
    from qpel.driver import DeclReport, FileReport

    rep = FileReport("x")
    rep.decls.append(DeclReport("l", "lemma", "semantic-mismatch", "lemma-checked"))
    assert rep.exit_code == 5


def test_eval_fair_coin():
    out = run("eval", "--backend", "stochastic", "corpus/intro.qpel", "coin")
    assert out.returncode == 0
    assert out.stdout.strip() == "inl <> : 1/2, inr <> : 1/2"


def test_eval_plus_under_quantum():
    out = run("eval", "--backend", "quantum", "corpus/intro.qpel", "flip")
    assert out.returncode == 0
    assert "[[0.5, 0.5], [0.5, 0.5]]" in out.stdout


def test_eval_unit_under_set(tmp_path):
    p = write(tmp_path, "u.qpel", "term u () : I = unit\n")
    out = run("eval", "--backend", "set", p, "u")
    assert out.stdout.strip() == "<>"


def test_eval_open_term_rejected():
    out = run("eval", "--backend", "set", "corpus/intro.qpel", "id1")
    assert out.returncode == 3


def test_wp_cross_check_zero_deviation():
    out = run("wp", "--cross-check", "corpus/intro.qpel", "zgate", "prjhalf")
    assert out.returncode == 0
    assert "cross-check max deviation" in out.stdout
    dev = float(out.stdout.strip().split()[-1])
    assert dev <= 1e-9


def test_reports_are_deterministic():
    a = run("check", "--verify", "stochastic", "--format", "json", "corpus/probabilistic.qpel")
    b = run("check", "--verify", "stochastic", "--format", "json", "corpus/probabilistic.qpel")
    assert a.stdout == b.stdout
    doc = json.loads(a.stdout)
    assert doc[0]["exit"] == 0


def test_rules_flag_gates_packs():
    out = run("check", "corpus/beta_iso.qpel")
    assert out.returncode == 4
    out2 = run("check", "--rules", "core,qubit,beta-iso", "corpus/beta_iso.qpel")
    assert out2.returncode == 0


def test_auto_depth_flag(tmp_path):
    p = write(
        tmp_path, "deep.qpel",
        "lemma l (x : qbit) : bot(bot(proj(x, 0))) <= proj(x, 0)\n",
    )
    shallow = run("check", "--auto-depth", "1", p)
    assert shallow.returncode == 4, shallow.stdout
    deep = run("check", "--auto-depth", "6", p)
    assert deep.returncode == 0, deep.stdout


def test_sidecar_proofs(tmp_path):
    src = write(tmp_path, "side.qpel", "lemma l (x : I) : (measure { bot(0) -> x }) = x : I\n")
    sidecar = {"l": {"rule": "measure-1"}}
    (tmp_path / "side.qpel.proofs.json").write_text(json.dumps(sidecar))
    out = run("check", src)
    assert out.returncode == 0, out.stdout
    # without the sidecar the term equality has no script
    (tmp_path / "side.qpel.proofs.json").unlink()
    out2 = run("check", src)
    assert out2.returncode == 4
