"""Theory checks: exact binomial bound, supermartingale, control, conservativeness."""

from __future__ import annotations

import csv
import math

import pytest

from dynfdr import BlockAR, ScenarioConfig
from dynfdr.verify import (
    CheckResult,
    all_passed,
    conservative_estimation_check,
    fdr_control_check,
    format_report,
    lemma2_exact_check,
    reference_normal_cdf,
    supermartingale_check,
    write_report_csv,
)


# ------------------------------------------------------- reference normal CDF


def test_reference_cdf_known_values():
    assert reference_normal_cdf(0.0) == 0.5
    # textbook value for the two-sided 5% point
    assert reference_normal_cdf(1.96) == pytest.approx(0.9750021048517795, abs=1e-12)
    assert reference_normal_cdf(-1.96) == pytest.approx(0.0249978951482205, abs=1e-12)


def test_reference_cdf_symmetry_and_monotonicity():
    xs = [0.1, 0.7, 1.3, 2.9, 3.0, 3.1, 5.5, 7.9]
    for x in xs:
        assert reference_normal_cdf(x) + reference_normal_cdf(-x) == pytest.approx(1.0, abs=1e-14)
    values = [reference_normal_cdf(x) for x in [-8, -3, -1, 0, 1, 3, 8]]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_reference_cdf_rejects_nan():
    with pytest.raises(ValueError):
        reference_normal_cdf(float("nan"))


# --------------------------------------------------------- binomial bound


def test_lemma2_two_term_sums():
    results = lemma2_exact_check(n_max=2, p_grid=(0.5,))
    by_n = {r.check: r for r in results}
    r1 = by_n["lemma2(n=1,p=0.5)"]
    assert r1.statistic == pytest.approx(0.75)
    assert r1.bound == pytest.approx(1.0)
    assert r1.passed
    r2 = by_n["lemma2(n=2,p=0.5)"]
    assert r2.statistic == pytest.approx(0.25 / 3 + 0.5 / 2 + 0.25)
    assert r2.bound == pytest.approx(1.0 / 1.5)
    assert r2.passed


def test_lemma2_degenerate_p_near_zero():
    # as p -> 0 the expectation collapses to 1/(n+1), which is the bound at p = 0
    results = lemma2_exact_check(n_max=5, p_grid=(1e-12,))
    for r in results:
        n = int(r.check.split("n=")[1].split(",")[0])
        assert r.statistic == pytest.approx(1.0 / (n + 1), rel=1e-9)
        assert r.passed


def test_lemma2_full_grid_holds():
    results = lemma2_exact_check()
    assert len(results) == 60 * 19
    assert all_passed(results)


def test_lemma2_input_validation():
    with pytest.raises(ValueError):
        lemma2_exact_check(n_max=61)
    with pytest.raises(ValueError):
        lemma2_exact_check(n_max=5, p_grid=(0.0,))


# --------------------------------------------------------- supermartingale


def test_supermartingale_terminal_value():
    results = supermartingale_check(m0=10, s=0.3, t=1.0, draws=2000, seed=1)
    terminal = [r for r in results if "terminal" in r.check]
    assert terminal and terminal[0].statistic == 0.0
    assert all_passed(results)


def test_supermartingale_s_equals_t_is_identity():
    results = supermartingale_check(m0=10, s=0.4, t=0.4, draws=5000, seed=2)
    for r in results:
        if "V(s)=" in r.check and not r.detail.startswith("skipped"):
            assert r.statistic == pytest.approx(r.bound)
        assert r.passed


def test_supermartingale_monte_carlo_case():
    results = supermartingale_check(m0=50, s=0.2, t=0.6, draws=100_000, seed=3)
    assert all_passed(results)
    checked = [r for r in results if not r.detail.startswith("skipped") and "V(s)=" in r.check]
    assert len(checked) >= 5


def test_supermartingale_reports_thin_strata():
    results = supermartingale_check(m0=50, s=0.5, t=0.9, draws=2000, seed=4)
    skipped = [r for r in results if r.detail.startswith("skipped")]
    assert skipped  # the binomial tails are too thin at 2000 draws
    assert all(r.passed for r in skipped)


def test_supermartingale_input_validation():
    with pytest.raises(ValueError):
        supermartingale_check(m0=0, s=0.2, t=0.6)
    with pytest.raises(ValueError):
        supermartingale_check(m0=5, s=0.7, t=0.6)


# ------------------------------------------------- FDR control + estimation


@pytest.fixture(scope="module")
def small_cfg():
    return ScenarioConfig(m=300, pi0=0.8, mu=2.0, n_reps=400, seed=606)


def test_fdr_control_check_passes(small_cfg):
    results = fdr_control_check(small_cfg)
    assert all_passed(results), format_report(results)
    names = {r.check for r in results}
    assert any(name.startswith("fdr-control[rb20]") for name in names)
    assert any(name.startswith("fdr-bound[") for name in names)
    assert "fdr-calibration[bh]" in names
    assert "fdr-calibration[orc]" in names


def test_fdr_control_check_dependent_is_one_sided():
    cfg = ScenarioConfig(
        m=300, pi0=0.8, mu=2.0, n_reps=300, seed=607, dependence=BlockAR(50, -0.9)
    )
    results = fdr_control_check(cfg, rules=("rb20",))
    names = {r.check for r in results}
    assert "fdr-control[bh]" in names and "fdr-calibration[bh]" not in names
    assert all_passed(results), format_report(results)


def test_conservative_estimation_check_passes(small_cfg):
    results = conservative_estimation_check(small_cfg)
    assert all_passed(results), format_report(results)
    assert len(results) == 4


def test_lsl_is_more_conservative_than_rb20():
    # the every-order-statistic scan stops earlier, inflating the estimate
    cfg = ScenarioConfig(m=500, pi0=0.8, mu=1.0, n_reps=300, seed=608)
    results = conservative_estimation_check(cfg, rules=("rb20", "lsl"))
    stats = {r.check: r.statistic for r in results}
    assert stats["conservative-pi0[lsl]"] > stats["conservative-pi0[rb20]"]


def test_pi0_estimates_in_sanity_band_under_strong_signal():
    cfg = ScenarioConfig(m=400, pi0=0.5, mu=4.0, n_reps=300, seed=609)
    results = conservative_estimation_check(cfg)
    for r in results:
        assert r.statistic >= cfg.pi0 - 3.0 * (r.tolerance / 3.0)
        assert r.statistic <= 1.2, f"{r.check} drifted high: {r.statistic}"


# ----------------------------------------------------------------- reports


def test_report_formatting_and_csv(tmp_path):
    results = [
        CheckResult("demo-pass", 0.1, 0.2, 0.01, True),
        CheckResult("demo-fail", 0.5, 0.2, 0.01, False, detail="oops"),
        CheckResult("demo-skip", float("nan"), 0.2, float("nan"), True, detail="skipped: thin"),
    ]
    text = format_report(results)
    assert "PASS demo-pass" in text
    assert "FAIL demo-fail" in text
    assert "SKIP demo-skip" in text
    assert "1 failed" in text
    assert not all_passed(results)

    out = tmp_path / "report.csv"
    write_report_csv(results, out)
    with out.open(newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["check", "statistic", "bound", "tolerance", "pass", "detail"]
    assert rows[1][4] == "pass" and rows[2][4] == "fail"
