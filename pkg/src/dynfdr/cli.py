"""Command-line front end.

Three subcommands: ``analyze`` runs one procedure on a p-value file,
``simulate`` runs the Monte Carlo study described by a JSON config, and
``verify`` runs the theory-check suites.  All output is deterministic
given flags and seeds.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import verify as verify_mod
from .procedures import DEFAULT_PROCEDURES, run_procedure
from .pvalues import MissingTruthLabels, PValueSample
from .selection import parse_rule_spec
from .simulate import (
    BlockAR,
    MetricsTable,
    ScenarioConfig,
    emit_figure_data,
    run_experiment,
)

__all__ = ["main", "console_entry"]

_PROCEDURE_HELP = (
    "bh, orc, fixed:<lambda>, rb:<grid>, rb20, lsl, kq:<k|median>, rbq:<levels>, rb20q"
)

VERIFY_SUITES = ("lemma2", "supermartingale", "fdr-control", "conservative", "all")


class CliError(Exception):
    """Fatal input problem; message goes to stderr, exit code 1."""


def _read_pvalue_file(path: str) -> PValueSample:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    values: list[float] = []
    labels: list[bool] = []
    has_labels: bool | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = re.split(r"[,\s]+", line)
        try:
            p = float(fields[0])
        except ValueError:
            if lineno == 1 and not values:
                continue  # header line
            raise CliError(f"line {lineno}: cannot parse p-value from {raw!r}") from None
        if not 0.0 <= p <= 1.0:
            raise CliError(f"line {lineno}: p-value {p} outside [0, 1]")
        if len(fields) > 2:
            raise CliError(f"line {lineno}: expected at most 2 columns, got {len(fields)}")
        row_has_label = len(fields) == 2
        if has_labels is None:
            has_labels = row_has_label
        elif has_labels != row_has_label:
            raise CliError(f"line {lineno}: inconsistent column count (truth labels must be all-or-none)")
        if row_has_label:
            if fields[1] not in ("0", "1"):
                raise CliError(f"line {lineno}: truth label must be 0 or 1, got {fields[1]!r}")
            labels.append(fields[1] == "1")
        values.append(p)
    if not values:
        raise CliError(f"no p-values found in {path}")
    truth = np.asarray(labels, dtype=bool) if has_labels else None
    return PValueSample(values=np.asarray(values, dtype=float), truth=truth)


def _validate_spec(spec: str, kappa: float, parser: argparse.ArgumentParser) -> None:
    if spec in ("bh", "orc"):
        return
    try:
        parse_rule_spec(spec, kappa)
    except ValueError:
        parser.error(f"invalid procedure spec {spec!r}; valid specs: {_PROCEDURE_HELP}")


def _cmd_analyze(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    kappa = args.alpha if args.kappa is None else args.kappa
    _validate_spec(args.procedure, kappa, parser)
    sample = _read_pvalue_file(args.input)
    try:
        res = run_procedure(args.procedure, sample, args.alpha, kappa, pi0=args.pi0)
    except MissingTruthLabels as exc:
        raise CliError(str(exc)) from exc

    if res.pi0 is not None:
        lam, pi0_star = res.pi0.lam, res.pi0.value
        flags = ",".join(res.pi0.flags) if res.pi0.flags else "-"
    else:
        lam = float("nan")
        pi0_star = 1.0 if args.procedure == "bh" else (args.pi0 or sample.m0 / sample.m)
        flags = "-"
    lines = [
        f"procedure: {args.procedure}",
        f"m: {sample.m}",
        f"alpha: {args.alpha:g}",
        f"kappa: {kappa:g}",
        f"lambda: {lam:g}",
        f"pi0_star: {pi0_star:.12g}",
        f"m0_hat: {pi0_star * sample.m:.12g}",
        f"threshold: {res.threshold:.12g}",
        f"fdr_estimate_at_threshold: {res.fdr_estimate_at_threshold:.12g}",
        f"n_rejected: {res.n_rejected}",
        "rejected_indices: " + (" ".join(str(i) for i in res.rejected) if res.n_rejected else "-"),
        f"flags: {flags}",
    ]
    out = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return 0


def _cfg_field(cfg: dict, name: str, kind, parser, required=True, default=None):
    if name not in cfg:
        if required:
            parser.error(f"config is missing field {name!r}")
        return default
    value = cfg[name]
    try:
        return kind(value)
    except (TypeError, ValueError):
        parser.error(f"config field {name!r} has bad value {value!r}")


def _parse_dependence(cfg: dict, parser: argparse.ArgumentParser) -> BlockAR | None:
    dep = cfg.get("dependence")
    if dep is None:
        return None
    if not isinstance(dep, dict) or "type" not in dep:
        parser.error("config field 'dependence' must be an object with a 'type'")
    kind = dep["type"]
    if kind in ("independent", "indep", "none"):
        return None
    if kind in ("block_ar", "blockar", "ar"):
        try:
            return BlockAR(block_size=int(dep["block_size"]), rho=float(dep["rho"]))
        except (KeyError, TypeError, ValueError) as exc:
            parser.error(f"config field 'dependence' is malformed: {exc}")
    parser.error(f"config field 'dependence.type' unknown: {kind!r}")
    return None  # unreachable


def _cmd_simulate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    try:
        cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"cannot read {args.config}: {exc}") from exc
    except json.JSONDecodeError as exc:
        parser.error(f"config is not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        parser.error("config must be a JSON object")

    m = _cfg_field(cfg, "m", int, parser)
    pi0 = _cfg_field(cfg, "pi0", float, parser)
    alpha = _cfg_field(cfg, "alpha", float, parser, required=False, default=0.05)
    kappa = _cfg_field(cfg, "kappa", float, parser, required=False, default=None)
    n_reps = _cfg_field(cfg, "J", int, parser)
    seed = _cfg_field(cfg, "seed", int, parser)
    mu_raw = cfg.get("mu")
    if mu_raw is None:
        parser.error("config is missing field 'mu'")
    mus = mu_raw if isinstance(mu_raw, list) else [mu_raw]
    try:
        mus = [float(v) for v in mus]
    except (TypeError, ValueError):
        parser.error(f"config field 'mu' has bad value {mu_raw!r}")
    dependence = _parse_dependence(cfg, parser)
    placement = cfg.get("signal_placement", "head")

    if args.procedures:
        procedures = [s.strip() for s in args.procedures.split(",") if s.strip()]
    else:
        procedures = cfg.get("procedures", list(DEFAULT_PROCEDURES))
    eff_kappa = alpha if kappa is None else kappa
    for spec in procedures:
        _validate_spec(spec, eff_kappa, parser)

    rows = []
    for idx, mu in enumerate(mus):
        try:
            scenario = ScenarioConfig(
                m=m,
                pi0=pi0,
                mu=mu,
                n_reps=n_reps,
                seed=seed + idx,
                alpha=alpha,
                kappa=kappa,
                dependence=dependence,
                signal_placement=placement,
            )
        except ValueError as exc:
            parser.error(f"config rejected: {exc}")
        table = run_experiment(scenario, procedures)
        rows.extend(table.rows)
    table = MetricsTable(rows=tuple(rows))
    emit_figure_data(table, args.out)

    header = f"{'scenario':<40} {'procedure':<10} {'fdr':>8} {'corr_fdr':>9} {'rel_pow':>8} {'mse_m0':>12}"
    print(header)
    print("-" * len(header))
    for row in table.rows:
        print(
            f"{row.scenario:<40} {row.procedure:<10} {row.realized_fdr:>8.4f} "
            f"{row.corrected_fdr:>9.4f} {row.relative_power:>8.4f} {row.mse_m0:>12.1f}"
        )
    print(f"wrote {args.out}")
    return 0


def _cmd_verify(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    results = []
    suites = VERIFY_SUITES[:-1] if args.suite == "all" else (args.suite,)
    for suite in suites:
        if suite == "lemma2":
            results.extend(verify_mod.lemma2_exact_check())
        elif suite == "supermartingale":
            for m0 in (10, 50):
                for s, t in ((0.2, 0.6), (0.5, 0.9)):
                    results.extend(
                        verify_mod.supermartingale_check(m0, s, t, draws=100_000, seed=args.seed)
                    )
        elif suite == "fdr-control":
            cfg = ScenarioConfig(m=1000, pi0=0.8, mu=2.0, n_reps=args.reps, seed=args.seed)
            results.extend(verify_mod.fdr_control_check(cfg))
        elif suite == "conservative":
            cfg = ScenarioConfig(m=1000, pi0=0.8, mu=1.0, n_reps=args.reps, seed=args.seed)
            results.extend(verify_mod.conservative_estimation_check(cfg))
    print(verify_mod.format_report(results))
    if args.out:
        verify_mod.write_report_csv(results, args.out)
        print(f"wrote {args.out}")
    return 0 if verify_mod.all_passed(results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynfdr",
        description="Dynamic adaptive FDR procedures: analyze, simulate, verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="run one procedure on a p-value file")
    p_an.add_argument("input", help="text file: one p-value per line, optional 0/1 truth column (1 = true null)")
    p_an.add_argument("--procedure", default="rb20", help=f"procedure spec (default rb20); one of: {_PROCEDURE_HELP}")
    p_an.add_argument("--alpha", type=float, default=0.05, help="target FDR level (default 0.05)")
    p_an.add_argument("--kappa", type=float, default=None, help="rejection-region bound (default: alpha)")
    p_an.add_argument("--pi0", type=float, default=None, help="true null proportion for orc")
    p_an.add_argument("--out", default=None, help="write the report here instead of stdout")
    p_an.set_defaults(func=_cmd_analyze)

    p_sim = sub.add_parser("simulate", help="run the Monte Carlo study from a JSON config")
    p_sim.add_argument("config", help="JSON config: m, pi0, mu (scalar or list), dependence, alpha, J, seed")
    p_sim.add_argument("--procedures", default=None, help="comma list of procedure specs (overrides config)")
    p_sim.add_argument("--out", default="metrics.csv", help="output CSV path (default metrics.csv)")
    p_sim.set_defaults(func=_cmd_simulate)

    p_ver = sub.add_parser("verify", help="run the theory-check suites")
    p_ver.add_argument("suite", choices=VERIFY_SUITES, help="which suite to run")
    p_ver.add_argument("--seed", type=int, default=20260808, help="Monte Carlo seed")
    p_ver.add_argument("--reps", type=int, default=1000, help="replications for the simulation-backed suites")
    p_ver.add_argument("--out", default=None, help="also write the report as CSV")
    p_ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_entry()
