"""Command-line behaviour: parsing, exit codes, determinism."""

from __future__ import annotations

import json

import pytest

from dynfdr import cli


def run_cli(args):
    """Run the CLI, normalizing argparse's SystemExit into a return code."""
    try:
        return cli.main(args)
    except SystemExit as exc:
        return int(exc.code)


@pytest.fixture()
def four_pvalues(tmp_path):
    path = tmp_path / "pvals.txt"
    path.write_text("0.01\n0.02\n0.5\n0.9\n")
    return path


def test_analyze_bh_matches_step_up(four_pvalues, capsys):
    code = run_cli(["analyze", str(four_pvalues), "--procedure", "bh", "--alpha", "0.05"])
    out = capsys.readouterr().out
    assert code == 0
    assert "n_rejected: 2" in out
    assert "rejected_indices: 0 1" in out
    assert "threshold: 0.02" in out


def test_analyze_rb20_nothing_in_region(tmp_path, capsys):
    path = tmp_path / "pvals.txt"
    path.write_text("0.3\n0.5\n0.7\n0.9\n")
    code = run_cli(["analyze", str(path), "--procedure", "rb20"])
    out = capsys.readouterr().out
    assert code == 0
    assert "n_rejected: 0" in out


def test_analyze_names_bad_line(tmp_path, capsys):
    path = tmp_path / "pvals.txt"
    path.write_text("0.01\n1.5\n0.9\n")
    code = run_cli(["analyze", str(path)])
    err = capsys.readouterr().err
    assert code == 1
    assert "line 2" in err


def test_analyze_unparseable_line_cited(tmp_path, capsys):
    path = tmp_path / "pvals.txt"
    path.write_text("0.01\nnot-a-number\n")
    code = run_cli(["analyze", str(path)])
    err = capsys.readouterr().err
    assert code == 1
    assert "line 2" in err


def test_analyze_empty_file(tmp_path, capsys):
    path = tmp_path / "empty.txt"
    path.write_text("")
    code = run_cli(["analyze", str(path)])
    assert code == 1
    assert "no p-values" in capsys.readouterr().err


def test_analyze_bad_spec_is_usage_error(four_pvalues, capsys):
    code = run_cli(["analyze", str(four_pvalues), "--procedure", "bogus"])
    err = capsys.readouterr().err
    assert code == 2
    assert "valid specs" in err


def test_analyze_header_and_labels(tmp_path, capsys):
    path = tmp_path / "pvals.txt"
    path.write_text("pvalue truth\n0.001 0\n0.02 1\n0.5 1\n0.9 1\n")
    code = run_cli(["analyze", str(path), "--procedure", "orc"])
    out = capsys.readouterr().out
    assert code == 0
    assert "pi0_star: 0.75" in out


def test_analyze_orc_without_pi0(four_pvalues, capsys):
    code = run_cli(["analyze", str(four_pvalues), "--procedure", "orc"])
    assert code == 1
    assert "pi0" in capsys.readouterr().err
    assert run_cli(["analyze", str(four_pvalues), "--procedure", "orc", "--pi0", "0.8"]) == 0


def test_analyze_inconsistent_labels(tmp_path, capsys):
    path = tmp_path / "pvals.txt"
    path.write_text("0.01 1\n0.5\n")
    code = run_cli(["analyze", str(path)])
    assert code == 1
    assert "line 2" in capsys.readouterr().err


def test_analyze_writes_out_file(four_pvalues, tmp_path):
    out = tmp_path / "report.txt"
    code = run_cli(["analyze", str(four_pvalues), "--procedure", "bh", "--out", str(out)])
    assert code == 0
    assert "n_rejected: 2" in out.read_text()


@pytest.fixture()
def sim_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(
        json.dumps(
            {"m": 80, "pi0": 0.8, "mu": [1.0, 2.0], "alpha": 0.05, "J": 25, "seed": 42}
        )
    )
    return path


def test_simulate_schema(sim_config, tmp_path, capsys):
    out = tmp_path / "metrics.csv"
    code = run_cli(["simulate", str(sim_config), "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    # header + scenarios(2) x procedures(6) x metrics(5)
    assert len(lines) == 1 + 2 * 6 * 5
    assert "wrote" in capsys.readouterr().out


def test_simulate_is_byte_deterministic(sim_config, tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(["simulate", str(sim_config), "--out", str(out1)]) == 0
    assert run_cli(["simulate", str(sim_config), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_simulate_rejects_zero_replications(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"m": 80, "pi0": 0.8, "mu": 1.0, "J": 0, "seed": 1}))
    code = run_cli(["simulate", str(path)])
    assert code == 2
    assert "n_reps" in capsys.readouterr().err


def test_simulate_names_missing_field(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"pi0": 0.8, "mu": 1.0, "J": 5, "seed": 1}))
    code = run_cli(["simulate", str(path)])
    assert code == 2
    assert "'m'" in capsys.readouterr().err


def test_simulate_rejects_malformed_json(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text("{not json")
    code = run_cli(["simulate", str(path)])
    assert code == 2
    assert "JSON" in capsys.readouterr().err


def test_simulate_block_dependence_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(
        json.dumps(
            {
                "m": 100,
                "pi0": 0.8,
                "mu": 1.0,
                "J": 10,
                "seed": 3,
                "dependence": {"type": "block_ar", "block_size": 50, "rho": -0.9},
            }
        )
    )
    out = tmp_path / "metrics.csv"
    assert run_cli(["simulate", str(path), "--out", str(out)]) == 0
    assert "ar50rho-0.9" in out.read_text()


def test_verify_lemma2_suite(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code = run_cli(["verify", "lemma2", "--out", str(out)])
    assert code == 0
    assert "checks, 0 failed" in capsys.readouterr().out
    assert len(out.read_text().splitlines()) == 1 + 60 * 19


def test_verify_unknown_suite(capsys):
    code = run_cli(["verify", "nonsense"])
    assert code == 2
    assert "invalid choice" in capsys.readouterr().err
