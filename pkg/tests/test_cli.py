"""CLI surface: subcommands, config merge, exit codes, output formats."""

import json
import math

import pytest

from medianqmc.cli import dispatch


def run_cli(capsys, *argv):
    code = dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_primes_output(capsys):
    code, out, _ = run_cli(capsys, "primes", "--n", "20")
    assert code == 0
    assert out == "11 13 17 19\n"


def test_primes_requires_n(capsys):
    code, _, err = run_cli(capsys, "primes")
    assert code == 1
    assert "missing required option --n" in err


def test_nodes_exact_rationals(capsys):
    code, out, _ = run_cli(capsys, "nodes", "--p", "5", "--z", "2")
    assert code == 0
    assert out.splitlines() == ["0/5", "2/5", "4/5", "1/5", "3/5"]


def test_nodes_two_dim(capsys):
    code, out, _ = run_cli(capsys, "nodes", "--p", "3", "--z", "1,2")
    assert code == 0
    assert out.splitlines() == ["0/3,0/3", "1/3,2/3", "2/3,1/3"]


def test_integrate_deterministic(capsys):
    args = ("integrate", "--fn", "f1", "--d", "1", "--c1", "2", "--n", "10",
            "--seed", "7")
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    lines = dict(line.split(" ", 1) for line in out1.splitlines())
    assert set(lines) == {"estimate_re", "estimate_im", "replicates", "total_evals"}
    assert int(lines["replicates"]) % 2 == 1
    assert int(lines["total_evals"]) == int(lines["replicates"]) * 7  # pool {7}


def test_integrate_trace_json(capsys):
    code, out, _ = run_cli(capsys, "integrate", "--fn", "f1", "--d", "2", "--n", "16",
                           "--seed", "3", "--trace")
    assert code == 0
    payload = json.loads(out.splitlines()[-1])
    assert payload["total_evals"] == sum(r["p"] for r in payload["replicates"])
    assert len(payload["replicates"]) % 2 == 1


def test_integrate_tent_flag(capsys):
    base = ("integrate", "--fn", "nonper", "--d", "2", "--theta", "0.5", "--n", "32",
            "--seed", "5")
    code1, plain, _ = run_cli(capsys, *base)
    code2, tented, _ = run_cli(capsys, *base, "--tent")
    assert code1 == code2 == 0
    assert plain != tented


def test_wce_spot_value(capsys):
    code, out, _ = run_cli(capsys, "wce", "--p", "2", "--z", "1", "--alpha", "1",
                           "--gamma", "const:1")
    assert code == 0
    value = float(out.split()[1])
    assert abs(value - math.pi / math.sqrt(12.0)) <= 1e-12


def test_wce_both_paths(capsys):
    code, out, _ = run_cli(capsys, "wce", "--p", "11", "--z", "3,7", "--alpha", "2",
                           "--gamma", "const:0.5", "--brute", "200")
    assert code == 0
    lines = dict(line.split(" ", 1) for line in out.splitlines())
    assert {"wce_kernel", "wce_bruteforce", "truncation_bound", "difference"} == set(lines)
    assert float(lines["difference"]) <= max(1e-6, float(lines["truncation_bound"]))


def test_wce_noninteger_alpha_requires_brute(capsys):
    code, _, err = run_cli(capsys, "wce", "--p", "11", "--z", "3", "--alpha", "1.5",
                           "--gamma", "const:1")
    assert code == 1
    code, out, _ = run_cli(capsys, "wce", "--p", "11", "--z", "3", "--alpha", "1.5",
                           "--gamma", "const:1", "--brute", "100")
    assert code == 0
    assert out.startswith("wce_bruteforce ")


def test_wce_nonprime_is_computation_error(capsys):
    code, _, err = run_cli(capsys, "wce", "--p", "4", "--z", "1", "--alpha", "1",
                           "--gamma", "const:1")
    assert code == 2
    assert "computation error" in err


def test_convergence_writes_csv_and_sidecar(capsys, tmp_path):
    out_path = tmp_path / "table.csv"
    code, out, _ = run_cli(capsys, "convergence", "--fn", "f1", "--d", "2",
                           "--grid", "8,16,32", "--R", "2", "--seed", "4",
                           "--out", str(out_path))
    assert code == 0
    assert "rows 3" in out
    lines = out_path.read_text().splitlines()
    assert lines[0] == "n,N_replicates,mean_abs_error,total_evals"
    assert len([l for l in lines if not l.startswith("#")]) == 4
    sidecar = json.loads((tmp_path / "table.csv.json").read_text())
    assert sidecar["fn"] == "f1" and sidecar["grid"] == [8, 16, 32]


def test_convergence_log_grid(capsys, tmp_path):
    out_path = tmp_path / "g.csv"
    code, out, _ = run_cli(capsys, "convergence", "--fn", "f1", "--d", "1",
                           "--grid", "log:10:100:3", "--R", "1", "--seed", "1",
                           "--out", str(out_path))
    assert code == 0
    rows = [l for l in out_path.read_text().splitlines()
            if l and not l.startswith(("n,", "#"))]
    assert [int(r.split(",")[0]) for r in rows] == [10, 32, 100]


def test_config_file_merge_json(capsys, tmp_path):
    cfg = tmp_path / "conf.json"
    cfg.write_text(json.dumps({"n": 20}))
    code, out, _ = run_cli(capsys, "primes", "--config", str(cfg))
    assert code == 0 and out == "11 13 17 19\n"
    # explicit flag wins over the config value
    code, out, _ = run_cli(capsys, "primes", "--config", str(cfg), "--n", "10")
    assert code == 0 and out == "7\n"


def test_config_file_merge_toml(capsys, tmp_path):
    cfg = tmp_path / "conf.toml"
    cfg.write_text('n = 10\n')
    code, out, _ = run_cli(capsys, "primes", "--config", str(cfg))
    assert code == 0 and out == "7\n"


def test_unknown_subcommand(capsys):
    code, _, err = run_cli(capsys, "frobnicate")
    assert code == 1
    assert "error" in err


def test_missing_subcommand(capsys):
    code, _, err = run_cli(capsys)
    assert code == 1


def test_unknown_flag(capsys):
    code, _, err = run_cli(capsys, "primes", "--n", "10", "--bogus", "1")
    assert code == 1


@pytest.mark.parametrize("sub", ["primes", "nodes", "integrate", "wce", "convergence"])
def test_help_exits_zero(capsys, sub):
    code, out, _ = run_cli(capsys, sub, "--help")
    assert code == 0
    assert "--seed" in out and "--workers" in out and "--config" in out


def test_computation_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "integrate", "--fn", "fac", "--d", "2",
                           "--a", "-1", "--n", "10")
    assert code == 2
