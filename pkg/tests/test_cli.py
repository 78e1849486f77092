import json
import os
import subprocess
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURE_A = os.path.join(HERE, "fixtures", "sysA.fsys")


def run(*args, **kw):
    return subprocess.run([sys.executable, "-m", "forcelab.cli", *args],
                          capture_output=True, text=True, **kw)


def test_check_system_family():
    out = run("check-system", "--family", "SYS-A")
    assert out.returncode == 0
    assert out.stdout.count("pass") == len(out.stdout.splitlines())


def test_check_system_file():
    out = run("check-system", "--system", FIXTURE_A)
    assert out.returncode == 0


def test_atomic_true():
    out = run("atomic", "--system", FIXTURE_A, "--p", "p",
              "--x", "zero", "--rel", "in", "--y", "y")
    assert out.returncode == 0
    assert out.stdout.strip() == "true"


def test_atomic_false_exits_one():
    out = run("atomic", "--family", "SYS-A", "--p", "1",
              "--x", "one", "--rel", "sub", "--y", "zero")
    assert out.returncode == 1
    assert out.stdout.strip() == "false"


def test_atomic_eq_alias():
    out = run("atomic", "--family", "SYS-A", "--p", "1",
              "--x", "y", "--rel", "=", "--y", "y")
    assert out.returncode == 0


def test_atomic_strict_rejects_non_hs():
    out = run("atomic", "--family", "SYS-A", "--p", "1",
              "--x", "xp", "--rel", "eq", "--y", "xp")
    assert out.returncode == 2
    assert "error" in out.stderr


def test_atomic_plain_mode():
    out = run("atomic", "--family", "SYS-A", "--p", "1",
              "--x", "xp", "--rel", "eq", "--y", "xp", "--plain")
    assert out.returncode == 0


def test_unknown_condition_is_usage_error():
    out = run("atomic", "--family", "SYS-A", "--p", "zz",
              "--x", "zero", "--rel", "in", "--y", "y")
    assert out.returncode == 2


def test_witness_certificate(tmp_path):
    path = tmp_path / "cert.json"
    out = run("witness", "--family", "SYS-A", "--p", "p",
              "--x", "zero", "--rel", "in", "--y", "y",
              "--emit-certificate", str(path))
    assert out.returncode == 0
    cert = json.loads(path.read_text())
    assert cert["roots"]
    assert cert["tuples"]


def test_forces_exact():
    out = run("forces", "--family", "SYS-A", "--p", "1",
              "--phi", "ex z . z in y", "--bind", "y=y", "--cutoff", "2")
    assert out.returncode == 0
    assert out.stdout.strip() == "true (exact)"


def test_forces_syntax_error():
    out = run("forces", "--family", "SYS-A", "--p", "1",
              "--phi", "ex z . (z in", "--bind", "y=y")
    assert out.returncode == 2


def test_generics_listing():
    out = run("generics", "--family", "SYS-A")
    assert out.returncode == 0
    assert out.stdout.splitlines() == ["1 p", "1 q"]


def test_truth_check_text():
    out = run("truth-check", "--system", FIXTURE_A,
              "--phi", "ex z . z in y", "--bind", "y=y", "--cutoff", "2")
    assert out.returncode == 0
    assert out.stdout.strip() == "PASS (2 generics, exact)"


def test_axioms():
    out = run("axioms", "--family", "SYS-A", "--cutoff", "2")
    assert out.returncode == 0
    assert "skipped infinity" in out.stdout
    assert "fail" not in out.stdout.replace("failed", "")


def test_pretame_witness_and_root_alias():
    out = run("pretame", "--family", "SYS-B", "--param", "M=2",
              "--param", "N=2", "--family-dense", "length",
              "--p", "root", "--cap", "1")
    assert out.returncode == 0
    assert out.stdout.startswith("witness q=s00 max-size=1")


def test_pretame_refusal_exit_code():
    out = run("pretame", "--family", "SYS-B", "--param", "M=2",
              "--param", "N=2", "--family-dense", "length",
              "--p", "s11", "--cap", "0")
    assert out.returncode == 1
    assert out.stdout.startswith("refusal")


def test_stratified():
    out = run("stratified", "--family", "SYS-C", "--param", "A=1",
              "--param", "B=1", "--param", "C=2")
    assert out.returncode == 0
    assert out.stdout.startswith("pass")


def test_sep_witness():
    out = run("sep-witness", "--family", "SYS-A", "--z", "y",
              "--gamma", "C0", "--p", "1")
    assert out.returncode == 0
    assert out.stdout.startswith("witness")


def test_coll_witness_refusal():
    out = run("coll-witness", "--family", "SYS-A", "--z", "y",
              "--gamma", "CP", "--p", "1")
    assert out.returncode == 1
    assert "refusal" in out.stdout


def test_orbit():
    out = run("orbit", "--family", "SYS-C", "--param", "A=1", "--param",
              "B=1", "--param", "C=3", "--q", "a0n0g0v0", "--e", "")
    assert out.returncode == 0
    assert out.stdout.strip() == "3"


def test_hs_counts():
    out = run("hs", "--family", "SYS-A", "--cutoff", "2")
    assert out.returncode == 0
    lines = out.stdout.splitlines()
    assert lines[0] == "4 names"
    assert len(lines) == 5


def test_machine_mode_emits_json_lines():
    for args in (
        ("check-system", "--family", "SYS-A", "--machine"),
        ("atomic", "--family", "SYS-A", "--p", "p", "--x", "zero",
         "--rel", "in", "--y", "y", "--machine"),
        ("generics", "--family", "SYS-A", "--machine"),
        ("truth-check", "--family", "SYS-A", "--phi", "ex z . z in y",
         "--bind", "y=y", "--machine"),
        ("orbit", "--family", "SYS-C", "--param", "C=2", "--q",
         "a0n0g0v0", "--e", "0", "--machine"),
    ):
        out = run(*args)
        assert out.returncode == 0, (args, out.stderr)
        for line in out.stdout.splitlines():
            obj = json.loads(line)
            assert isinstance(obj, dict)
            assert json.dumps(obj, sort_keys=True) == line


def test_machine_reports_are_deterministic():
    battery = (
        ("check-system", "--family", "SYS-B", "--param", "M=2",
         "--param", "N=2", "--machine"),
        ("axioms", "--family", "SYS-A", "--cutoff", "2", "--machine"),
        ("pretame", "--family", "SYS-B", "--param", "M=2", "--param", "N=2",
         "--family-dense", "length", "--p", "root", "--cap", "4",
         "--machine"),
        ("hs", "--family", "SYS-A", "--cutoff", "3", "--machine"),
    )
    first = [run(*args).stdout for args in battery]
    second = [run(*args).stdout for args in battery]
    assert first == second


def test_usage_error_exits_two():
    assert run("atomic", "--family", "SYS-A").returncode == 2
    assert run("no-such-command").returncode == 2
    assert run("--help").returncode == 0


def test_system_and_family_are_exclusive():
    out = run("check-system", "--system", FIXTURE_A, "--family", "SYS-A")
    assert out.returncode == 2


def test_resource_cap_flag():
    out = run("hs", "--family", "SYS-A", "--cutoff", "4",
              "--resource-cap", "100")
    assert out.returncode == 2
    assert "error" in out.stderr
