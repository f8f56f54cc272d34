import json
import subprocess
import sys
from pathlib import Path

from quadrikit.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"
UNIVERSAL = str(DATA / "universal.qf")
CORANK2 = str(DATA / "corank2.qf")


def run_cli(args):
    proc = subprocess.run(
        [sys.executable, "-m", "quadrikit.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc


def test_degeneration_k2_prints_coordinate_ideal(capsys):
    code = main(["degeneration", UNIVERSAL, "--k", "2"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "(a, b, c)"


def test_degeneration_k1_prints_discriminant(capsys):
    code = main(["degeneration", UNIVERSAL, "--k", "1"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "(b^2 - 4*a*c)"


def test_degeneration_k0_exit_3(capsys):
    assert main(["degeneration", UNIVERSAL, "--k", "0"]) == 3


def test_missing_file_exit_2():
    assert main(["degeneration", "no_such_file.qf", "--k", "1"]) == 2


def test_malformed_qf_exit_2(tmp_path):
    bad = tmp_path / "bad.qf"
    bad.write_text("base_vars = [a]\nfiber_rank = 2\nq = \"x1 + * x2\"\n")
    assert main(["degeneration", str(bad), "--k", "1"]) == 2


def test_clifford_table_lists_basis(capsys):
    assert main(["clifford", UNIVERSAL, "--table", "0"]) == 0
    out = capsys.readouterr().out
    assert "degree 0: 8 monomials" in out
    assert "e1*e2*e3*e4*l^-2" in out


def test_clifford_center_output(capsys):
    assert main(["clifford", UNIVERSAL, "--center"]) == 0
    out = capsys.readouterr().out
    assert "discriminant alpha^2 - 4*beta = b^2 - 4*a*c" in out
    assert "discriminant / det = 1" in out


def test_clifford_trace(capsys):
    assert main(["clifford", UNIVERSAL, "--trace", "e1*e2*e3*e4*l^-2"]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_node_rank_degenerate_message(capsys):
    assert main(["node-rank", "1", "1"]) == 0
    assert capsys.readouterr().out.strip() == "rank 2 (degenerate: 1 - lambda*mu = 0)"


def test_node_rank_json_roundtrip(capsys):
    assert main(["node-rank", "2", "0", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["rank"] == 4
    assert payload["degenerate"] is False
    assert json.loads(json.dumps(payload)) == payload


def test_reduce_command(capsys):
    assert main(["reduce", UNIVERSAL, "--v", "1,0,0,0"]) == 0
    out = capsys.readouterr().out
    assert "reduced form: a*x1^2 + b*x1*x2 + c*x2^2" in out
    assert "Ideal over Q[a,b,c,x3,x4]: a*x3^2 + b*x3*x4 + c*x4^2" in out
    assert "certified: True" in out


def test_ideal_command_json(capsys):
    assert main(["ideal", UNIVERSAL, "--w", "1,0,0,0", "--n", "0", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["rank"] == 4
    assert len(payload["generators"]) == 4


def test_spinor_command(capsys):
    assert main(["spinor", UNIVERSAL, "--w", "1,0,0,0", "--n", "1"]) == 0
    out = capsys.readouterr().out
    assert "phi_1: 4 x 4" in out


def test_lines_command(capsys):
    assert main(["lines", UNIVERSAL]) == 0
    out = capsys.readouterr().out
    assert "Ideal over Q[a,b,c,y13,y14,y23,y24]" in out


def test_fiber_command(capsys):
    assert main(["fiber", UNIVERSAL, "--point", "a=0,b=0,c=0"]) == 0
    out = capsys.readouterr().out
    assert "corank 2: two planes meeting at a point" in out


def test_net_command(tmp_path, capsys):
    paths = []
    for i, coeffs in enumerate(
        ([1, 2, 3, 4, 5, 6], [7, 1, 2, 1, 3, 1], [1, 1, 1, 2, 1, 4])
    ):
        src = " + ".join(f"{c}*x{k}^2" for k, c in enumerate(coeffs, start=1))
        p = tmp_path / f"f{i}.qf"
        p.write_text(f'base_vars = []\nfiber_rank = 6\nq = "{src}"\n')
        paths.append(str(p))
    assert main(["net", *paths]) == 0
    out = capsys.readouterr().out
    assert "det(b) degree in parameters: 6 (homogeneous: True, bound 6)" in out


def test_verify_matrix_factorization_suite(capsys):
    code = main(
        ["verify", UNIVERSAL, "--suite", "matrix-factorization", "--seed", "24237"]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "suite matrix-factorization: PASS" in out


def test_verify_all_json_schema(capsys):
    code = main(["verify", UNIVERSAL, "--suite", "all", "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["ok"] is True
    assert payload["seed"] == 24237
    operations = {r["operation"] for r in payload["reports"]}
    assert operations == {
        "multiplication-iso",
        "cokernel",
        "flag",
        "duality",
        "matrix-factorization",
    }
    assert json.loads(json.dumps(payload, sort_keys=True)) == payload


def test_verify_exit_4_on_failure(monkeypatch, capsys):
    import quadrikit.cli as cli
    from quadrikit.cliffmod import Report

    failing = Report(operation="duality", configuration={}, samples=[], ok=False)
    monkeypatch.setattr(cli, "_run_suites", lambda *a, **k: [failing])
    assert main(["verify", UNIVERSAL, "--suite", "duality"]) == 4


def test_verify_jobs_parallel_matches_serial(capsys):
    assert main(["verify", UNIVERSAL, "--suite", "duality", "--json"]) == 0
    serial = capsys.readouterr().out
    assert main(["verify", UNIVERSAL, "--suite", "duality", "--json", "--jobs", "4"]) == 0
    parallel = capsys.readouterr().out
    assert serial == parallel


def test_cli_byte_determinism_subprocess():
    a = run_cli(["verify", UNIVERSAL, "--suite", "duality", "--json"])
    b = run_cli(["verify", UNIVERSAL, "--suite", "duality", "--json"])
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_seed_changes_sample_points():
    a = run_cli(["verify", UNIVERSAL, "--suite", "duality", "--json", "--seed", "1"])
    b = run_cli(["verify", UNIVERSAL, "--suite", "duality", "--json", "--seed", "2"])
    assert a.returncode == b.returncode == 0
    assert a.stdout != b.stdout


def test_console_script_installed():
    proc = run_cli(["--help"])
    assert proc.returncode == 0
    assert "quadrikit" in proc.stdout
