# Copyright (c) 2026 The toneres developers

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from toneres import __version__
from toneres.config import RunConfig, load_run_config
from toneres.errors import ConfigurationError, SolverError, ToneresError
from toneres.montecarlo import (
    CampaignConfig,
    gen_data_symbols,
    run_campaign,
    run_sweep,
    trial_rng,
    write_campaign,
    write_sweep_summary,
)
from toneres.montecarlo.output import prepare_output_dir
from toneres.ofdm import AllocationKind, FreqVector, ToneAllocation, compose, idft, make_allocation, papr
from toneres.reduction import reduce_sota, reduce_sparse
from toneres.selfcheck import SelfCheck
from toneres.util.log import log_init, logger

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_SOLVER_ERROR = 3


def _indices(values: Sequence[int]) -> str:
    return ",".join(str(int(v)) for v in values)


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {
        "n_total": getattr(args, "n", None),
        "n_prt": getattr(args, "n_prt", None),
        "n_trials": getattr(args, "trials", None),
        "seed": getattr(args, "seed", None),
        "workers": getattr(args, "threads", None),
        "rho_star_db": getattr(args, "rho_star_db", None),
        "solver_verbose": True if args.verbose >= 2 else None,
    }
    methods = getattr(args, "methods", None)
    if methods:
        overrides["methods"] = methods
    return overrides


def _target_dir(out: Path, run: RunConfig, rho_star_db: float) -> Path:
    if len(run.rho_targets_db) == 1:
        return out
    return out / f"rho_{rho_star_db:g}dB"


def _reduction_input(cfg: CampaignConfig, data: Optional[str], trial: int):
    if data is not None:
        if cfg.allocation.kind is not AllocationKind.FIXED:
            raise ConfigurationError("--data needs a fixed allocation ([allocation] strategy = fixed)")
        d = FreqVector.from_csv(data)
        return d, ToneAllocation(d.n, cfg.allocation.indices)

    rng = trial_rng(cfg.seed, trial)
    alloc = make_allocation(cfg.n_total, cfg.n_prt, cfg.allocation, rng=rng)
    return gen_data_symbols(alloc, cfg.constellation, rng), alloc


def cmd_reduce(args: argparse.Namespace) -> int:
    """Reduce the PAPR of a single OFDM symbol and print the result"""
    run = load_run_config(args.config, _overrides(args))
    cfg = run.campaign
    d, alloc = _reduction_input(cfg, args.data, args.trial)
    input_papr = papr(idft(d))

    lines = [f"method: {args.method}"]
    if args.method == "sota":
        sota = reduce_sota(d, alloc, cfg.sparse.sota)
        r = sota.r_freq
        achieved = sota.achieved_papr
        lines += [
            f"status: {sota.status.value}",
            f"peak_power: {sota.peak_power:.12g}",
        ]
        active, freed = sota.active_prt, sota.freed_prt
    else:
        result = reduce_sparse(d, alloc, cfg.sparse)
        r = result.r_freq
        achieved = result.achieved_papr
        lines += [
            f"status: {result.status.value}",
            f"rho_star_db: {cfg.sparse.rho_star_db:.12g}",
            f"iterations: {result.iterations}",
            f"prt_power: {result.r_freq.energy:.12g}",
            f"p_max: {result.p_max:.12g}",
        ]
        active, freed = result.active_prt, result.freed_prt

    lines += [
        f"input_papr_db: {input_papr.db:.12g}",
        f"papr_db: {'undefined' if achieved is None else format(achieved.db, '.12g')}",
        f"n_active: {len(active)}",
        f"active_prt: {_indices(active)}",
        f"n_freed: {len(freed)}",
        f"freed_prt: {_indices(freed)}",
    ]
    print("\n".join(lines))

    if args.write_signals:
        out = prepare_output_dir(args.out)
        _, x_time = compose(d, r, alloc)
        d.to_csv(out / "data_freq.csv")
        r.to_csv(out / "prt_freq.csv")
        x_time.to_csv(out / "tx_time.csv")
        logger.info("Wrote signals to %s", out)
    return EXIT_OK


def cmd_campaign(args: argparse.Namespace) -> int:
    """Run one campaign per target PAPR and write the CSV set"""
    run = load_run_config(args.config, _overrides(args))
    out = prepare_output_dir(args.out)
    for rho_star_db in run.rho_targets_db:
        result = run_campaign(run.for_target(rho_star_db))
        write_campaign(result, _target_dir(out, run, rho_star_db))
        for method in result.methods:
            print(
                f"rho_star_db={rho_star_db:g} method={method.value} "
                f"success_rate={result.success_rate[method]:.4f} "
                f"mean_active={result.mean_active(method):.3f} mode_active={result.mode_active(method)}"
            )
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    """Run campaigns over system sizes at a fixed reserved tone ratio"""
    run = load_run_config(args.config, _overrides(args))
    n_values: List[int] = args.n_values or list(run.sweep_n_values)
    out = prepare_output_dir(args.out)
    for rho_star_db in run.rho_targets_db:
        target_dir = _target_dir(out, run, rho_star_db)
        results = run_sweep(run.for_target(rho_star_db), n_values)
        for result in results:
            write_campaign(result, target_dir / f"n_{result.config.n_total}")
            for method in result.methods:
                print(
                    f"rho_star_db={rho_star_db:g} n_total={result.config.n_total} method={method.value} "
                    f"success_rate={result.success_rate[method]:.4f}"
                )
        write_sweep_summary(results, target_dir)
    return EXIT_OK


def cmd_selfcheck(args: argparse.Namespace) -> int:
    """Run the oracle suite; exit 0 only if every check passes"""
    results = SelfCheck(seed=args.seed or 0, instances=args.instances).run()
    for result in results:
        print(f"{'PASS' if result.passed else 'FAIL'} {result.name}: {result.detail}")
    failed = [result for result in results if not result.passed]
    if failed:
        print(f"first failing check: {failed[0].name}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="INI configuration file")
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument("--seed", type=int, help="random seed, overrides the configuration")
    parser.add_argument("--n", type=int, help="number of subcarriers N")
    parser.add_argument("--n-prt", type=int, help="number of reserved tones N_R")


def _add_campaign_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rho-star-db", type=float, nargs="+", help="target PAPR(s) in dB")
    parser.add_argument("--trials", type=int, help="number of trials")
    parser.add_argument("--threads", type=int, help="number of parallel workers")
    parser.add_argument(
        "--method",
        dest="methods",
        nargs="+",
        choices=["none", "sota", "sparse-fp"],
        help="methods to run, overrides the configuration",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toneres", description="Tone reservation PAPR reduction for OFDM")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    parser.add_argument("-q", "--quiet", action="store_true", help="only log errors")
    subparsers = parser.add_subparsers(dest="command", required=True)

    reduce = subparsers.add_parser("reduce", help="reduce the PAPR of one OFDM symbol")
    _add_common(reduce)
    reduce.add_argument("--method", choices=["sota", "sparse-fp"], default="sparse-fp")
    reduce.add_argument("--rho-star-db", type=float, nargs=1, help="target PAPR in dB")
    reduce.add_argument("--trial", type=int, default=0, help="trial index of the generated symbol")
    reduce.add_argument("--data", help="CSV file (index, re, im) with the data symbols")
    reduce.add_argument("--write-signals", action="store_true", help="write data, reserved tone and TX CSVs")
    reduce.set_defaults(func=cmd_reduce)

    campaign = subparsers.add_parser("campaign", help="run a Monte Carlo campaign")
    _add_common(campaign)
    _add_campaign_flags(campaign)
    campaign.set_defaults(func=cmd_campaign)

    sweep = subparsers.add_parser("sweep", help="run campaigns over system sizes")
    _add_common(sweep)
    _add_campaign_flags(sweep)
    sweep.add_argument("--n-values", type=int, nargs="+", help="system sizes to sweep")
    sweep.set_defaults(func=cmd_sweep)

    selfcheck = subparsers.add_parser("selfcheck", help="run the embedded oracle suite")
    selfcheck.add_argument("--seed", type=int, default=0)
    selfcheck.add_argument("--instances", type=int, default=20, help="random instances per grid-search check")
    selfcheck.set_defaults(func=cmd_selfcheck)

    return parser


def _log_level(args: argparse.Namespace) -> int:
    if args.quiet:
        return logging.ERROR
    if args.verbose >= 2:
        return logging.DEBUG
    if args.verbose == 1:
        return logging.INFO
    return logging.WARNING


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    level = _log_level(args)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    log_init(level)

    try:
        return args.func(args)
    except ConfigurationError as e:
        print(f"toneres: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except SolverError as e:
        print(f"toneres: solver failure: {e}", file=sys.stderr)
        return EXIT_SOLVER_ERROR
    except ToneresError as e:
        print(f"toneres: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
