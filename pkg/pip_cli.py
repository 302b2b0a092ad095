#!/usr/bin/env python3
"""
PIP command-line interface.

  estimate   PIP of a full versus a null model on a CSV data set
  relate     convert between PIP, p-value, MSE difference and overlap
  simulate   run a simulation study from a JSON configuration
  replicate  rebuild published two-group studies and report p-value and PIP

JSON goes to stdout, diagnostics and summaries to stderr. Exit codes: 0 success,
2 invalid input, 3 estimation failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

import config
from core.dataset import Dataset
from core.losses import SQUARED_ERROR
from core.rng import RngStream
from models.fitters import get_fitter
from models.ols import fit_ols
from plugin.two_sample import pip_c1, pip_c2, pip_expected_from_fit
from plugin.uniform import moments_from_fit, pip_expected_uniform_mc, pip_plugin_uniform
from relations.mappings import (
    asymptotic_scaled_log_p,
    delta_mse_from_pip,
    overlap_from_pip,
    pip_from_pvalue,
    pvalue_from_pip,
)
from resampling.estimators import kfold_pip, repeated_kfold_pip, split_sample_pip
from sim.gbm_study import run_gbm_study
from sim.replication import run_replication
from sim.results import StudyResult, display_decision_table, emit_results, write_decision_table
from sim.two_sample_study import run_two_sample_study
from utilities.batch_processor import BatchProcessor
from utilities.error_handler import (
    EXIT_INPUT_ERROR,
    EXIT_OK,
    ConfigError,
    FileError,
    PipError,
    console,
    error_handler,
    exit_code_for,
    setup_logging,
)
from validation.data_models import (
    DecisionTable,
    ModelFamily,
    PipEstimate,
    ResamplingConfig,
    StudyKind,
    TiePolicy,
    UniformCovariateParams,
)
from validation.data_validator import data_validator

logger = logging.getLogger("pip_cli")

PLUGIN_METHODS = ("c1", "c2", "expected")
RESAMPLING_METHODS = ("split", "cv", "repcv")


def _emit_json(payload: Any) -> None:
    sys.stdout.write(json.dumps(payload) + "\n")
    sys.stdout.flush()


def _round(value: Optional[float]) -> Optional[float]:
    # + 0.0 folds -0.0 into 0.0
    return None if value is None else round(float(value), config.FLOAT_DECIMALS) + 0.0


def _columns(text: Optional[str]) -> List[str]:
    if not text:
        return []
    return [c.strip() for c in text.split(",") if c.strip()]


def _resampling_config(args: argparse.Namespace) -> ResamplingConfig:
    try:
        return ResamplingConfig(k=args.k, repeats=args.repeats, alpha=args.alpha, split_ratio=args.split_ratio,
                                tie_policy=args.tie_policy, seed=args.seed, stratify_by=args.stratify_by)
    except ValidationError as e:
        raise ConfigError(f"invalid resampling flags: {e.errors()[0]['loc'][0]}: {e.errors()[0]['msg']}")


def _plugin_estimate(data: Dataset, null_spec: List[str], full_spec: List[str], method: str,
                     cfg: ResamplingConfig, n_mc: int, rng: RngStream) -> PipEstimate:
    """c1 / c2 / expected on a two-sample or simple-linear structure."""
    if null_spec or len(full_spec) != 1:
        raise ConfigError(f"method {method} needs an intercept-only null model and one full-model covariate")
    column = full_spec[0]
    values = data.column(column)
    binary = bool(np.isin(values, (0.0, 1.0)).all())
    fit1 = fit_ols(data, full_spec)

    if binary:
        if method == "c1":
            return pip_c1(fit1.coefficient(column), fit1.sigma)
        if method == "c2":
            return pip_c2(data, fit_ols(data, []), fit1, group=column)
        return pip_expected_from_fit(data, n_mc, rng, group=column, fit1=fit1, tie_policy=cfg.tie_policy)

    # continuous covariate: uniform on the observed range
    a, b = float(values.min()), float(values.max())
    if method == "c1":
        return pip_plugin_uniform(fit1, a, b, column)
    if method == "c2":
        raise ConfigError("method c2 needs a 0/1 group covariate")
    try:
        params = UniformCovariateParams(beta0=fit1.intercept, beta1=fit1.coefficient(column),
                                        sigma=fit1.sigma, a=a, b=b)
    except ValidationError as e:
        raise ConfigError(f"cannot build the uniform-covariate model: {e.errors()[0]['msg']}")
    return pip_expected_uniform_mc(params, moments_from_fit(fit1), n_mc, rng, cfg.tie_policy)


def cmd_estimate(args: argparse.Namespace) -> int:
    null_spec = _columns(args.null)
    full_spec = _columns(args.full)
    if not full_spec:
        raise ConfigError("--full must name at least one covariate")
    if not set(null_spec) <= set(full_spec):
        raise ConfigError("the null model covariates must be a subset of the full model covariates")
    if args.method in PLUGIN_METHODS and args.model != ModelFamily.OLS.value:
        raise ConfigError(f"method {args.method} is only defined for model ols")
    cfg = _resampling_config(args)
    used = list(dict.fromkeys(full_spec + ([cfg.stratify_by] if cfg.stratify_by else [])))
    data = data_validator.load_csv(args.csv, args.outcome, used)
    rng = RngStream(cfg.seed, 0)

    if args.method in PLUGIN_METHODS:
        estimate = _plugin_estimate(data, null_spec, full_spec, args.method, cfg, args.n_mc, rng)
    else:
        fitter = get_fitter(args.model)
        if args.method == "split":
            estimate = split_sample_pip(data, null_spec, full_spec, fitter, SQUARED_ERROR, cfg, rng)
        elif args.method == "cv":
            estimate = kfold_pip(data, null_spec, full_spec, fitter, SQUARED_ERROR, cfg.k, cfg.tie_policy,
                                 rng, cfg.stratify_by)
        else:
            estimate = repeated_kfold_pip(data, null_spec, full_spec, fitter, SQUARED_ERROR, cfg, rng)

    _emit_json(estimate.to_record())
    return EXIT_OK


def cmd_relate(args: argparse.Namespace) -> int:
    if (args.p is None) == (args.pip is None):
        raise ConfigError("give exactly one of --p and --pip")
    if args.p is not None:
        p_value = args.p
        pip = pip_from_pvalue(p_value, args.n)
    else:
        pip = args.pip
        p_value = pvalue_from_pip(pip, args.n)

    result: Dict[str, Any] = {
        "n": args.n,
        "pip": _round(pip),
        "p_value": _round(p_value),
        "scaled_log_p_limit": _round(asymptotic_scaled_log_p(pip)),
    }
    if args.sigma is not None:
        result["delta_mse"] = _round(delta_mse_from_pip(pip, args.sigma))
    result["overlap"] = _round(overlap_from_pip(pip, args.n))
    _emit_json(result)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    sim_config = data_validator.load_simulation_config(args.config)
    out_dir = Path(args.out_dir)
    if out_dir.exists() and not out_dir.is_dir():
        raise FileError(f"output path {out_dir} is not a directory")

    processor = args.processor
    result = StudyResult(table=DecisionTable())
    if sim_config.study == StudyKind.TWO_SAMPLE:
        for scenario in sim_config.two_sample:
            result.extend(run_two_sample_study(scenario, sim_config.estimators, sim_config.resampling,
                                               sim_config.n_mc, sim_config.n_t, processor))
    else:
        for scenario in sim_config.nonlinear:
            result.extend(run_gbm_study(scenario, sim_config.resampling, sim_config.estimators,
                                        sim_config.gbm, processor))

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise FileError(f"cannot create output directory {out_dir}: {e}")
    emit_results(result.records, out_dir / config.RECORDS_FILE)
    write_decision_table(result.table, out_dir / config.DECISION_TABLE_FILE)
    if not args.quiet:
        display_decision_table(result.table, title=f"Correct decisions (%) - {Path(args.config).stem}")
    _emit_json(result.table.to_records())
    return EXIT_OK


def cmd_replicate(args: argparse.Namespace) -> int:
    rep_config = data_validator.load_replication_config(args.config)
    seed = rep_config.master_seed if args.seed is None else args.seed
    results = run_replication(rep_config.studies, rep_config.resampling, seed, args.processor)
    _emit_json([r.to_record() for r in results])
    return EXIT_OK


def _add_resampling_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--k', type=int, default=config.DEFAULT_K, help='Number of folds')
    parser.add_argument('--repeats', type=int, default=config.DEFAULT_REPEATS, help='Repeats of k-fold CV')
    parser.add_argument('--alpha', type=float, default=config.DEFAULT_ALPHA, help='Quantile level of the bounds')
    parser.add_argument('--split-ratio', type=float, default=config.DEFAULT_SPLIT_RATIO,
                        help='Training share of the split-sample estimator')
    parser.add_argument('--tie-policy', choices=[t.value for t in TiePolicy], default=TiePolicy.STRICT.value,
                        help='Scoring of exact loss ties')
    parser.add_argument('--stratify-by', help='0/1 column to stratify folds on')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Probability of Improved Prediction toolkit")
    parser.add_argument('--log-level', default=None, help='Logging level (default from PIP_LOG_LEVEL)')
    parser.add_argument('--summary', action='store_true',
                        help='Show inputs, worker pool and error counts on stderr afterwards')
    subparsers = parser.add_subparsers(dest='command', required=True)

    estimate = subparsers.add_parser('estimate', help='Estimate the PIP of two models on a CSV data set')
    estimate.add_argument('csv', help='Input CSV with a header row')
    estimate.add_argument('--outcome', '-y', default='y', help='Outcome column')
    estimate.add_argument('--null', default='', help='Comma-separated null model covariates')
    estimate.add_argument('--full', required=True, help='Comma-separated full model covariates')
    estimate.add_argument('--model', choices=[m.value for m in ModelFamily], default=ModelFamily.OLS.value)
    estimate.add_argument('--method', choices=PLUGIN_METHODS + RESAMPLING_METHODS, default='repcv')
    estimate.add_argument('--seed', type=int, default=config.DEFAULT_SEED, help='Master seed')
    estimate.add_argument('--n-mc', type=int, default=config.DEFAULT_N_MC, help='Monte-Carlo draws (expected)')
    _add_resampling_flags(estimate)
    estimate.set_defaults(handler=cmd_estimate)

    relate = subparsers.add_parser('relate', help='Convert between PIP and p-value')
    relate.add_argument('--n', type=int, required=True, help='Total sample size of the two-sample design')
    relate.add_argument('--p', type=float, help='Two-sided p-value')
    relate.add_argument('--pip', type=float, help='PIP in [0.5, 1)')
    relate.add_argument('--sigma', type=float, help='Error SD for the MSE difference')
    relate.set_defaults(handler=cmd_relate)

    simulate = subparsers.add_parser('simulate', help='Run a simulation study')
    simulate.add_argument('config', help='Simulation configuration JSON')
    simulate.add_argument('--out-dir', '-o', default='results', help='Directory for the CSV and JSON results')
    simulate.add_argument('--threads', type=int, default=config.DEFAULT_THREADS, help='Worker threads')
    simulate.add_argument('--quiet', '-q', action='store_true', help='No progress bar or summary table')
    simulate.set_defaults(handler=cmd_simulate)

    replicate = subparsers.add_parser('replicate', help='Replicate published two-group studies')
    replicate.add_argument('config', help='Replication configuration JSON')
    replicate.add_argument('--seed', type=int, default=None, help='Override the configured master seed')
    replicate.add_argument('--threads', type=int, default=config.DEFAULT_THREADS, help='Worker threads')
    replicate.set_defaults(handler=cmd_replicate)
    return parser


def _display_run_summary(args: argparse.Namespace) -> None:
    data_validator.display_validation_summary()
    processor = getattr(args, 'processor', None)
    if processor is not None:
        processor.display_stats()
    errors = error_handler.create_error_summary()
    if errors['total_errors']:
        breakdown = ", ".join(f"{name} x{count}" for name, count in sorted(errors['error_breakdown'].items()))
        console.print(f"Errors: {breakdown}", style=config.STYLE_WARNING)


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI interface."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    # counters cover one invocation
    error_handler.reset_error_counts()
    data_validator.reset_validation_stats()

    if getattr(args, 'threads', 1) < 1:
        console.print("Error: --threads must be at least 1", style=config.STYLE_ERROR)
        return EXIT_INPUT_ERROR
    if hasattr(args, 'threads'):
        args.processor = BatchProcessor(max_workers=args.threads, show_progress=not getattr(args, 'quiet', True))

    try:
        return args.handler(args)
    except PipError as e:
        code = exit_code_for(e)
        if code == EXIT_INPUT_ERROR:
            error_handler.record(e)
            console.print(f"Error: {e}", style=config.STYLE_ERROR)
        else:
            error_handler.log_error_with_context(e, {'command': args.command})
        return code
    except Exception as e:
        error_handler.log_error_with_context(e, {'command': args.command})
        return exit_code_for(e)
    finally:
        if args.summary:
            _display_run_summary(args)


if __name__ == "__main__":
    sys.exit(main())
