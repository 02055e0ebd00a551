"""Step-up thresholding procedures.

``bh_step_up`` is the classical linear step-up rule (and, run at an
inflated level, the oracle benchmark).  ``dynamic_adaptive`` is the full
pipeline: select lambda with a stopping rule, estimate pi0, then push the
truncated FDR estimate through the sup-threshold functional.  Reported
thresholds are always realized p-values (or the region bound), because
anything between two order statistics rejects the same set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .estimators import FdrEstimatorConfig, Pi0Estimate, fdr_hat_star
from .pvalues import (
    EmpiricalProcesses,
    MissingTruthLabels,
    PValueSample,
    SortedPValues,
)
from .selection import LambdaRule, parse_rule_spec, rule_id, select

__all__ = [
    "ProcedureResult",
    "bh_step_up",
    "threshold_functional",
    "dynamic_adaptive",
    "run_procedure",
    "DEFAULT_PROCEDURES",
]

# the candidate set mirrored from the simulation study
DEFAULT_PROCEDURES = ("bh", "orc", "fixed:0.5", "rb20", "lsl", "rb20q")


@dataclass(frozen=True)
class ProcedureResult:
    """Threshold, rejection set and the estimates that produced them.

    ``rejected`` holds the original indices with p_i <= threshold, sorted
    ascending.  ``pi0`` is None for procedures that do not estimate it
    (plain step-up and the oracle).
    """

    procedure_id: str
    threshold: float
    rejected: np.ndarray
    fdr_estimate_at_threshold: float
    pi0: Pi0Estimate | None = None

    @property
    def n_rejected(self) -> int:
        return int(self.rejected.size)


def _rejection_set(sp: SortedPValues, threshold: float) -> np.ndarray:
    n = int(np.searchsorted(sp.ordered, threshold, side="right"))
    return np.sort(sp.order[:n])


def bh_step_up(
    sp: SortedPValues,
    alpha: float,
    pi0_target: float = 1.0,
    procedure_id: str = "bh",
) -> ProcedureResult:
    """Linear step-up cut at the largest p_(k) with p_(k) <= k * level / m.

    ``pi0_target`` inflates the level to alpha / pi0_target (capped at 1):
    1 gives the plain procedure, the true null proportion gives the
    oracle.  The reported FDR estimate at the threshold uses pi0_target.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha={alpha} outside (0, 1)")
    if not 0.0 < pi0_target <= 1.0:
        raise ValueError(f"pi0_target={pi0_target} outside (0, 1]")
    level = min(alpha / pi0_target, 1.0)
    m = sp.m
    passing = np.flatnonzero(sp.ordered <= np.arange(1, m + 1) * (level / m))
    if passing.size == 0:
        return ProcedureResult(procedure_id, 0.0, np.empty(0, dtype=np.int64), 0.0, None)
    threshold = float(sp.ordered[int(passing[-1])])
    rejected = _rejection_set(sp, threshold)
    estimate = m * pi0_target * threshold / max(rejected.size, 1)
    return ProcedureResult(procedure_id, threshold, rejected, float(estimate), None)


def threshold_functional(
    proc: EmpiricalProcesses, pi0_star: float, cfg: FdrEstimatorConfig
) -> float:
    """Largest cut-off in [0, kappa] whose FDR estimate stays at or below alpha.

    Scans the order statistics inside the rejection region step-up style;
    when the estimate at kappa itself is admissible the whole region
    qualifies and kappa is returned (same rejection set either way).
    Returns 0 when nothing qualifies.
    """
    if pi0_star <= 0.0:
        raise ValueError(f"pi0_star={pi0_star} must be positive")
    alpha, kappa = cfg.alpha, cfg.kappa
    m = proc.m
    n_region = proc.count_R(kappa)
    if m * pi0_star * kappa / max(n_region, 1) <= alpha:
        return kappa
    if n_region == 0:
        return 0.0
    head = proc.sorted.ordered[:n_region]
    passing = np.flatnonzero(m * pi0_star * head <= alpha * np.arange(1, n_region + 1))
    if passing.size == 0:
        return 0.0
    return float(head[int(passing[-1])])


def dynamic_adaptive(
    sample: PValueSample | EmpiricalProcesses,
    rule: LambdaRule,
    cfg: FdrEstimatorConfig,
    procedure_id: str | None = None,
) -> ProcedureResult:
    """Select lambda, estimate pi0, threshold the truncated FDR estimate."""
    if rule.kappa != cfg.kappa:
        raise ValueError(
            f"rule kappa={rule.kappa} does not match estimator config kappa={cfg.kappa}"
        )
    proc = sample if isinstance(sample, EmpiricalProcesses) else EmpiricalProcesses.from_sample(sample)
    est = select(proc, rule)
    threshold = threshold_functional(proc, est.value, cfg)
    rejected = _rejection_set(proc.sorted, threshold)
    estimate_at = fdr_hat_star(proc, est.value, threshold, cfg)
    return ProcedureResult(
        procedure_id or rule_id(rule),
        float(threshold),
        rejected,
        float(estimate_at),
        est,
    )


def run_procedure(
    spec: str,
    sample: PValueSample | EmpiricalProcesses,
    alpha: float,
    kappa: float | None = None,
    pi0: float | None = None,
) -> ProcedureResult:
    """Run a procedure named by its string id.

    ``bh`` and ``orc`` are the step-up baselines (``orc`` needs pi0, either
    given explicitly or derived from truth labels); every other spec is a
    lambda-selection rule fed to the dynamic adaptive pipeline.
    """
    spec = spec.strip()
    proc = sample if isinstance(sample, EmpiricalProcesses) else EmpiricalProcesses.from_sample(sample)
    if spec == "bh":
        return bh_step_up(proc.sorted, alpha, 1.0, "bh")
    if spec == "orc":
        if pi0 is None:
            if proc.truth is None:
                raise MissingTruthLabels(
                    "orc needs the true null proportion: pass pi0 or supply truth labels"
                )
            pi0 = float(np.count_nonzero(proc.truth)) / proc.m
        if not 0.0 < pi0 <= 1.0:
            raise ValueError(f"pi0={pi0} outside (0, 1]")
        return bh_step_up(proc.sorted, alpha, pi0, "orc")
    cfg = FdrEstimatorConfig(alpha=alpha, kappa=kappa)
    rule = parse_rule_spec(spec, cfg.kappa)
    return dynamic_adaptive(proc, rule, cfg, procedure_id=spec)
