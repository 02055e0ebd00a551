"""Estimators of the true-null proportion and of the FDR at a cut-off.

The plus-one variant of the tail estimator is bounded away from zero and
is what the thresholding step always consumes; the plain variant exists
because some selection rules prefer to run their stopping comparison on
it.  Estimates above 1 are legal and are never clipped here: capping is a
caller decision, not an estimator one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pvalues import EmpiricalProcesses

__all__ = [
    "STOREY",
    "STOREY_PLUS",
    "Pi0Estimate",
    "FdrEstimatorConfig",
    "pi0_storey",
    "pi0_storey_plus",
    "fdr_hat_star",
    "m0_hat",
]

STOREY = "storey"
STOREY_PLUS = "storey_plus"


@dataclass(frozen=True)
class Pi0Estimate:
    """Outcome of a tuning-parameter selection rule.

    ``lam`` is the chosen tuning parameter, ``value`` the pi0 estimate at
    ``lam`` (selection rules always report the plus-one variant, whatever
    they compared with), ``trace`` every (candidate, estimate) pair the
    rule examined in scan order, and ``flags`` any fallbacks or clamps
    that fired.
    """

    lam: float
    variant: str
    value: float
    trace: tuple[tuple[float, float], ...] = ()
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class FdrEstimatorConfig:
    """Rejection-region bound ``kappa`` and target level ``alpha``.

    ``kappa`` splits the unit interval into the rejection region
    [0, kappa] and the estimation region [kappa, 1]; it defaults to
    ``alpha``, which keeps the restriction on the rejection threshold
    immaterial in practice.
    """

    alpha: float
    kappa: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha={self.alpha} outside (0, 1)")
        kappa = self.alpha if self.kappa is None else float(self.kappa)
        if not 0.0 < kappa < 1.0:
            raise ValueError(f"kappa={kappa} outside (0, 1)")
        object.__setattr__(self, "kappa", kappa)


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"lambda={lam} outside [0, 1)")
    return lam


def pi0_storey(proc: EmpiricalProcesses, lam: float) -> float:
    """Tail estimate of the true-null proportion, (m - R(lam)) / ((1-lam) m)."""
    lam = _check_lambda(lam)
    m = proc.m
    return (m - proc.count_R(lam)) / ((1.0 - lam) * m)


def pi0_storey_plus(proc: EmpiricalProcesses, lam: float) -> float:
    """Plus-one tail estimate, (m - R(lam) + 1) / ((1-lam) m); always > 0."""
    lam = _check_lambda(lam)
    m = proc.m
    return (m - proc.count_R(lam) + 1) / ((1.0 - lam) * m)


def fdr_hat_star(
    proc: EmpiricalProcesses, pi0_star: float, t: float, cfg: FdrEstimatorConfig
) -> float:
    """Truncated FDR estimate at cut-off t.

    Equals m * pi0_star * t / (R(t) v 1) for t <= kappa and is pinned to 1
    beyond kappa, which confines any rejection threshold to [0, kappa].
    """
    if pi0_star <= 0.0:
        raise ValueError(f"pi0_star={pi0_star} must be positive")
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t={t} outside [0, 1]")
    if t > cfg.kappa:
        return 1.0
    return proc.m * pi0_star * t / max(proc.count_R(t), 1)


def m0_hat(pi0: float, m: int) -> float:
    """Estimated count of true nulls, pi0 * m."""
    if pi0 < 0.0:
        raise ValueError(f"pi0={pi0} must be nonnegative")
    return float(pi0) * m
