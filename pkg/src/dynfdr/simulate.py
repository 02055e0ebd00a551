"""Monte Carlo harness: correlated one-sided test statistics, procedure
metrics over replications, and a long-format CSV emitter for the result
panels (realized FDR, power relative to the oracle, log MSE of the
estimated true-null count).

Replication j draws from a substream that is a pure function of
(seed, j), so results do not depend on execution order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import special

from .procedures import DEFAULT_PROCEDURES, run_procedure
from .pvalues import EmpiricalProcesses, PValueSample, sort_pvalues

__all__ = [
    "BlockAR",
    "ScenarioConfig",
    "MetricsRow",
    "MetricsTable",
    "normal_cdf",
    "generate_statistics",
    "run_experiment",
    "emit_figure_data",
]


def normal_cdf(x):
    """Standard normal distribution function (vectorized)."""
    return special.ndtr(x)


@dataclass(frozen=True)
class BlockAR:
    """Within-block AR(1) dependence: corr(Z_i, Z_j) = rho^|i-j|."""

    block_size: int
    rho: float

    def __post_init__(self) -> None:
        if int(self.block_size) < 1:
            raise ValueError(f"block_size={self.block_size} must be >= 1")
        object.__setattr__(self, "block_size", int(self.block_size))
        if not -1.0 < self.rho < 1.0:
            raise ValueError(f"rho={self.rho} outside (-1, 1)")


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation scenario.

    ``pi0`` is the true-null proportion (m0 = round(pi0 * m)), ``mu`` the
    mean shift of the false-null statistics, ``dependence`` None for
    independent noise or a BlockAR spec.  ``signal_placement`` is "head"
    (false nulls fill the first m1 slots, concentrating signal inside
    blocks) or "random".
    """

    m: int
    pi0: float
    mu: float
    n_reps: int
    seed: int
    alpha: float = 0.05
    kappa: float | None = None
    dependence: BlockAR | None = None
    signal_placement: str = "head"

    def __post_init__(self) -> None:
        if int(self.m) < 1:
            raise ValueError(f"m={self.m} must be >= 1")
        object.__setattr__(self, "m", int(self.m))
        if not 0.0 < self.pi0 <= 1.0:
            raise ValueError(f"pi0={self.pi0} outside (0, 1]")
        if self.mu < 0.0:
            raise ValueError(f"mu={self.mu} must be >= 0")
        if int(self.n_reps) < 1:
            raise ValueError(f"n_reps={self.n_reps} must be >= 1")
        object.__setattr__(self, "n_reps", int(self.n_reps))
        if int(self.seed) < 0:
            raise ValueError(f"seed={self.seed} must be a nonnegative integer")
        object.__setattr__(self, "seed", int(self.seed))
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha={self.alpha} outside (0, 1)")
        kappa = self.alpha if self.kappa is None else float(self.kappa)
        if not 0.0 < kappa < 1.0:
            raise ValueError(f"kappa={kappa} outside (0, 1)")
        object.__setattr__(self, "kappa", kappa)
        if self.signal_placement not in ("head", "random"):
            raise ValueError(f"signal_placement={self.signal_placement!r} not 'head' or 'random'")

    @property
    def m0(self) -> int:
        return int(round(self.pi0 * self.m))

    @property
    def m1(self) -> int:
        return self.m - self.m0

    @property
    def label(self) -> str:
        dep = (
            "indep"
            if self.dependence is None
            else f"ar{self.dependence.block_size}rho{self.dependence.rho:g}"
        )
        return f"m={self.m};pi0={self.pi0:g};mu={self.mu:g};dep={dep}"


def _standard_noise(cfg: ScenarioConfig, rng: np.random.Generator) -> np.ndarray:
    dep = cfg.dependence
    if dep is None:
        return rng.standard_normal(cfg.m)
    b = dep.block_size
    n_blocks = -(-cfg.m // b)
    e = rng.standard_normal((n_blocks, b))
    z = np.empty_like(e)
    z[:, 0] = e[:, 0]
    scale = math.sqrt(1.0 - dep.rho * dep.rho)
    for i in range(1, b):
        # stationary AR(1) recursion: unit marginal variance at every lag
        z[:, i] = dep.rho * z[:, i - 1] + scale * e[:, i]
    return z.reshape(-1)[: cfg.m]


def generate_statistics(cfg: ScenarioConfig, replication: int) -> PValueSample:
    """Draw one replication: labelled one-sided p-values p_i = 1 - Phi(X_i).

    True-null statistics are standard normal, false nulls get a +mu mean
    shift.  The replication substream is a pure function of
    (cfg.seed, replication).
    """
    replication = int(replication)
    if replication < 0:
        raise ValueError(f"replication={replication} must be >= 0")
    rng = np.random.default_rng([cfg.seed, replication])
    x = _standard_noise(cfg, rng)
    truth = np.ones(cfg.m, dtype=bool)
    if cfg.m1 > 0:
        if cfg.signal_placement == "head":
            positions = np.arange(cfg.m1)
        else:
            positions = rng.permutation(cfg.m)[: cfg.m1]
        x[positions] += cfg.mu
        truth[positions] = False
    pvals = normal_cdf(-x)
    return PValueSample(values=pvals, truth=truth)


@dataclass(frozen=True)
class MetricsRow:
    """Aggregated metrics for one (procedure, scenario) pair."""

    scenario: str
    procedure: str
    realized_fdr: float
    fdr_se: float
    corrected_fdr: float
    corrected_fdr_se: float
    relative_power: float
    relative_power_se: float
    mse_m0: float
    mse_m0_se: float
    mean_lambda: float
    mean_lambda_se: float
    mean_pi0: float
    n_reps: int


@dataclass(frozen=True)
class MetricsTable:
    rows: tuple[MetricsRow, ...] = field(default_factory=tuple)

    def get(self, procedure: str, scenario: str | None = None) -> MetricsRow:
        for row in self.rows:
            if row.procedure == procedure and (scenario is None or row.scenario == scenario):
                return row
        raise KeyError(f"no row for procedure={procedure!r}, scenario={scenario!r}")


def _mean_se(x: np.ndarray) -> tuple[float, float]:
    mean = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else float("nan")
    return mean, se


def _ratio_of_means_se(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    am, bm = float(a.mean()), float(b.mean())
    if bm == 0.0:
        return float("nan"), float("nan")
    r = am / bm
    if a.size < 2:
        return r, float("nan")
    n = a.size
    va = float(a.var(ddof=1)) / n
    vb = float(b.var(ddof=1)) / n
    cab = float(np.cov(a, b, ddof=1)[0, 1]) / n
    var_r = (va + r * r * vb - 2.0 * r * cab) / (bm * bm)
    return r, math.sqrt(max(var_r, 0.0))


def run_experiment(
    cfg: ScenarioConfig, procedures: Sequence[str] = DEFAULT_PROCEDURES
) -> MetricsTable:
    """Run every procedure over cfg.n_reps replications and aggregate.

    Per replication: FDP = V/(R v 1), power = S/m1 (0 when m1 = 0), and
    the implied true-null count estimate.  The oracle is always run (it
    anchors the corrected FDR and the power ratio); realized FDR is
    additionally reported with the oracle's deviation from alpha
    subtracted out.  Deterministic given (cfg, procedures).
    """
    specs = list(dict.fromkeys(procedures))
    if "orc" not in specs:
        specs.append("orc")
    J, m, m0, m1 = cfg.n_reps, cfg.m, cfg.m0, cfg.m1

    fdp = {s: np.empty(J) for s in specs}
    power = {s: np.empty(J) for s in specs}
    m0h = {s: np.empty(J) for s in specs}
    lam = {s: np.empty(J) for s in specs}
    pi0v = {s: np.empty(J) for s in specs}

    for j in range(J):
        sample = generate_statistics(cfg, j)
        proc = EmpiricalProcesses(sort_pvalues(sample), sample.truth)
        for s in specs:
            res = run_procedure(s, proc, cfg.alpha, cfg.kappa, pi0=cfg.pi0)
            n_rej = res.n_rejected
            v = int(np.count_nonzero(sample.truth[res.rejected]))
            fdp[s][j] = v / max(n_rej, 1)
            power[s][j] = (n_rej - v) / m1 if m1 > 0 else 0.0
            if res.pi0 is not None:
                pi0_used = res.pi0.value
                lam[s][j] = res.pi0.lam
            else:
                pi0_used = 1.0 if s == "bh" else cfg.pi0
                lam[s][j] = np.nan
            pi0v[s][j] = pi0_used
            m0h[s][j] = pi0_used * m

    rows = []
    for s in specs:
        realized, fdr_se = _mean_se(fdp[s])
        if s == "orc":
            corrected, corrected_se = cfg.alpha, 0.0
            rel, rel_se = 1.0, 0.0
        else:
            diff = fdp[s] - fdp["orc"]
            corrected, corrected_se = _mean_se(diff)
            corrected += cfg.alpha
            rel, rel_se = _ratio_of_means_se(power[s], power["orc"])
        mse, mse_se = _mean_se((m0h[s] - m0) ** 2)
        if np.isnan(lam[s]).all():
            mean_lam, lam_se = float("nan"), float("nan")
        else:
            mean_lam, lam_se = _mean_se(lam[s])
        rows.append(
            MetricsRow(
                scenario=cfg.label,
                procedure=s,
                realized_fdr=realized,
                fdr_se=fdr_se,
                corrected_fdr=corrected,
                corrected_fdr_se=corrected_se,
                relative_power=rel,
                relative_power_se=rel_se,
                mse_m0=mse,
                mse_m0_se=mse_se,
                mean_lambda=mean_lam,
                mean_lambda_se=lam_se,
                mean_pi0=float(pi0v[s].mean()),
                n_reps=J,
            )
        )
    return MetricsTable(rows=tuple(rows))


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def emit_figure_data(table: MetricsTable, path: str | Path) -> None:
    """Write the table as long-format CSV: scenario, procedure, metric, value, mc_se.

    Five metric rows per table row: fdr, corrected_fdr, rel_power,
    log_mse_m0 (natural log), mean_lambda.  Values carry 12 significant
    digits.
    """
    if not table.rows:
        raise ValueError("metrics table is empty, nothing to emit")
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["scenario", "procedure", "metric", "value", "mc_se"])
            for row in table.rows:
                if row.mse_m0 > 0.0:
                    log_mse = math.log(row.mse_m0)
                    log_mse_se = row.mse_m0_se / row.mse_m0
                else:
                    log_mse, log_mse_se = float("-inf"), float("nan")
                metrics = [
                    ("fdr", row.realized_fdr, row.fdr_se),
                    ("corrected_fdr", row.corrected_fdr, row.corrected_fdr_se),
                    ("rel_power", row.relative_power, row.relative_power_se),
                    ("log_mse_m0", log_mse, log_mse_se),
                    ("mean_lambda", row.mean_lambda, row.mean_lambda_se),
                ]
                for name, value, se in metrics:
                    writer.writerow([row.scenario, row.procedure, name, _fmt(value), _fmt(se)])
    except OSError as exc:
        raise OSError(f"cannot write metrics to {path}: {exc}") from exc
