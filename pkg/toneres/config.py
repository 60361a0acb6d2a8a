# Copyright (c) 2026 The toneres developers

"""INI configuration of campaigns, sweeps and single reductions

Every key is optional; the defaults reproduce the simulation setup with
N = 128 subcarriers, 20 reserved tones, QPSK, Ω = 10, α = 1e-4, ε = 7e-4 and
a 6 dB target.  See README.md for the full schema.
"""

import configparser
import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple, TypeVar, Union

from toneres.conic import SolverTolerances
from toneres.errors import ConfigurationError
from toneres.montecarlo import CampaignConfig, Constellation, ExecutorKind, Method
from toneres.ofdm import AllocationStrategy
from toneres.reduction import SotaConfig, SparseFpConfig

_T = TypeVar("_T")

SCHEMA: Dict[str, Tuple[str, ...]] = {
    "ofdm": ("n_total", "n_prt", "constellation", "oversampling"),
    "allocation": ("strategy", "indices"),
    "sota": ("omega",),
    "sparse_fp": (
        "rho_star_db",
        "p_max",
        "budget_gap",
        "alpha",
        "epsilon",
        "max_fp_iters",
        "convergence_tol",
        "threshold_final_only",
    ),
    "solver": ("solvers", "feasibility_tol", "kkt_tol", "max_iters", "recheck_tol", "verbose"),
    "campaign": ("n_trials", "seed", "methods", "workers", "executor", "record_timing"),
    "sweep": ("n_values",),
}

DEFAULT_SWEEP = (64, 128, 256)


@dataclass(frozen=True)
class RunConfig:
    """A parsed configuration: the campaign plus multi-target and sweep settings"""

    campaign: CampaignConfig
    rho_targets_db: Tuple[float, ...]
    sweep_n_values: Tuple[int, ...] = DEFAULT_SWEEP

    def for_target(self, rho_star_db: float) -> CampaignConfig:
        """The campaign configuration with a different target PAPR"""
        sparse = dataclasses.replace(self.campaign.sparse, rho_star_db=rho_star_db)
        return dataclasses.replace(self.campaign, sparse=sparse)


def read_config(path: Optional[Union[str, Path]]) -> configparser.ConfigParser:
    """Read and schema-check an INI file; None gives an empty configuration"""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if path is None:
        return parser

    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Configuration file not found: {path}")
    try:
        with open(path) as f:
            parser.read_file(f)
    except (OSError, configparser.Error) as e:
        raise ConfigurationError(f"Unable to parse configuration file {path}: {e}") from e

    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigurationError(f"{path}: unknown section [{section}]")
        for key in parser[section]:
            if key not in SCHEMA[section]:
                raise ConfigurationError(f"{path}: unknown key {key!r} in [{section}]")
    return parser


def _get(
    parser: configparser.ConfigParser,
    section: str,
    key: str,
    convert: Callable[[str], _T],
    default: _T,
) -> _T:
    raw = parser.get(section, key, fallback=None)
    if raw is None or raw.strip() == "":
        return default
    try:
        return convert(raw.strip())
    except (ValueError, ConfigurationError) as e:
        raise ConfigurationError(f"Invalid value {raw!r} for {key} in [{section}]: {e}") from e


def _bool(raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("1", "yes", "true", "on"):
        return True
    if lowered in ("0", "no", "false", "off"):
        return False
    raise ValueError("expected a boolean")


def _list(convert: Callable[[str], _T]) -> Callable[[str], Tuple[_T, ...]]:
    def parse(raw: str) -> Tuple[_T, ...]:
        return tuple(convert(item.strip()) for item in raw.split(",") if item.strip())

    return parse


def build_run_config(
    parser: configparser.ConfigParser,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Combine a parsed file with command-line overrides, flags winning

    Recognized overrides: n_total, n_prt, n_trials, seed, workers,
    solver_verbose, rho_star_db (a sequence of targets) and methods (a
    sequence of names).
    """
    overrides = {key: value for key, value in (overrides or {}).items() if value is not None}
    defaults = CampaignConfig()
    sparse_defaults = SparseFpConfig()
    tol_defaults = SolverTolerances()

    tolerances = SolverTolerances(
        feasibility=_get(parser, "solver", "feasibility_tol", float, tol_defaults.feasibility),
        kkt=_get(parser, "solver", "kkt_tol", float, tol_defaults.kkt),
        max_iters=_get(parser, "solver", "max_iters", int, tol_defaults.max_iters),
        recheck=_get(parser, "solver", "recheck_tol", float, tol_defaults.recheck),
        solvers=_get(parser, "solver", "solvers", _list(str.upper), tol_defaults.solvers),
        verbose=overrides.get("solver_verbose", _get(parser, "solver", "verbose", _bool, tol_defaults.verbose)),
    )
    sota = SotaConfig(omega=_get(parser, "sota", "omega", float, SotaConfig().omega), tolerances=tolerances)

    targets: Tuple[float, ...] = _get(
        parser, "sparse_fp", "rho_star_db", _list(float), (sparse_defaults.rho_star_db,)
    )
    if "rho_star_db" in overrides:
        targets = tuple(float(t) for t in overrides["rho_star_db"])
    if not targets:
        raise ConfigurationError("At least one target PAPR is required")

    p_max: Optional[float] = _get(parser, "sparse_fp", "p_max", float, None)  # type: ignore[arg-type]
    sparse = SparseFpConfig(
        rho_star_db=targets[0],
        p_max=p_max,
        budget_gap=_get(parser, "sparse_fp", "budget_gap", float, sparse_defaults.budget_gap),
        alpha=_get(parser, "sparse_fp", "alpha", float, sparse_defaults.alpha),
        epsilon=_get(parser, "sparse_fp", "epsilon", float, sparse_defaults.epsilon),
        max_fp_iters=_get(parser, "sparse_fp", "max_fp_iters", int, sparse_defaults.max_fp_iters),
        convergence_tol=_get(parser, "sparse_fp", "convergence_tol", float, sparse_defaults.convergence_tol),
        threshold_final_only=_get(parser, "sparse_fp", "threshold_final_only", _bool, False),
        sota=sota,
    )

    strategy_name = _get(parser, "allocation", "strategy", str.lower, "random")
    if strategy_name == "random":
        allocation = AllocationStrategy.random()
    elif strategy_name == "fixed":
        indices = _get(parser, "allocation", "indices", _list(int), ())
        allocation = AllocationStrategy.fixed(indices)
    else:
        raise ConfigurationError(f"Unknown allocation strategy {strategy_name!r}, expected random or fixed")

    methods: Sequence[str] = overrides.get(
        "methods", _get(parser, "campaign", "methods", _list(str), tuple(m.value for m in defaults.methods))
    )
    executor_name = _get(parser, "campaign", "executor", str, defaults.executor.value)
    try:
        executor = ExecutorKind(executor_name.lower())
    except ValueError:
        raise ConfigurationError(f"Unknown executor {executor_name!r}, expected thread or process") from None

    campaign = CampaignConfig(
        n_total=overrides.get("n_total", _get(parser, "ofdm", "n_total", int, defaults.n_total)),
        n_prt=overrides.get("n_prt", _get(parser, "ofdm", "n_prt", int, defaults.n_prt)),
        constellation=_get(parser, "ofdm", "constellation", Constellation.parse, defaults.constellation),
        oversampling=_get(parser, "ofdm", "oversampling", int, defaults.oversampling),
        n_trials=overrides.get("n_trials", _get(parser, "campaign", "n_trials", int, defaults.n_trials)),
        seed=overrides.get("seed", _get(parser, "campaign", "seed", int, defaults.seed)),
        methods=tuple(Method.parse(m) for m in methods),
        sparse=sparse,
        allocation=allocation,
        workers=overrides.get("workers", _get(parser, "campaign", "workers", int, defaults.workers)),
        executor=executor,
        record_timing=_get(parser, "campaign", "record_timing", _bool, defaults.record_timing),
    )
    sweep = _get(parser, "sweep", "n_values", _list(int), DEFAULT_SWEEP)
    return RunConfig(campaign=campaign, rho_targets_db=targets, sweep_n_values=sweep)


def load_run_config(path: Optional[Union[str, Path]], overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """Read an INI file (or nothing) and apply overrides"""
    return build_run_config(read_config(path), overrides)
