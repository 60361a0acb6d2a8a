# Copyright (c) 2026 The toneres developers

import concurrent.futures
import dataclasses
import enum
import math
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from toneres.errors import ConfigurationError, SolverError
from toneres.ofdm import AllocationKind, AllocationStrategy, FreqVector, ToneAllocation, make_allocation
from toneres.ofdm import compose, papr_oversampled
from toneres.reduction import SotaResult, SparseFpConfig, reduce_sota, reduce_sparse
from toneres.reduction.sparse_fp import PAPR_SLACK
from toneres.util.clock import Timespec
from toneres.util.log import logger
from .constellation import Constellation, gen_data_symbols
from .stats import ecdf, mode, pmf

_T = TypeVar("_T")

FAILURE_STATUS = "SolverFailure"


@enum.unique
class Method(enum.Enum):
    NONE = "none"
    SOTA = "sota"
    SPARSE_FP = "sparse-fp"

    @classmethod
    def parse(cls, name: str) -> "Method":
        try:
            return cls(name.strip().lower())
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ConfigurationError(f"Unknown method {name!r}, expected one of: {choices}") from None


@enum.unique
class ExecutorKind(enum.Enum):
    THREAD = "thread"
    PROCESS = "process"


@dataclass(frozen=True)
class CampaignConfig:
    """Everything that determines a campaign, including its seed

    The reserved tone settings of the baseline live in `sparse.sota` so that
    both methods share one initializer configuration.
    """

    n_total: int = 128
    n_prt: int = 20
    constellation: Constellation = Constellation.QPSK
    n_trials: int = 2000
    seed: int = 0
    methods: Tuple[Method, ...] = (Method.NONE, Method.SOTA, Method.SPARSE_FP)
    sparse: SparseFpConfig = field(default_factory=SparseFpConfig)
    allocation: AllocationStrategy = field(default_factory=AllocationStrategy.random)
    oversampling: int = 1
    workers: int = 1
    executor: ExecutorKind = ExecutorKind.THREAD
    record_timing: bool = False

    def __post_init__(self) -> None:
        if self.n_trials < 1:
            raise ConfigurationError(f"A campaign needs at least one trial, got {self.n_trials}")
        if self.n_total < 2 or not 1 <= self.n_prt < self.n_total:
            raise ConfigurationError(f"Invalid system size N={self.n_total}, N_R={self.n_prt}")
        if not self.methods:
            raise ConfigurationError("A campaign needs at least one method")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigurationError("Methods must not repeat")
        if self.oversampling < 1:
            raise ConfigurationError(f"Oversampling factor must be at least 1, got {self.oversampling}")
        if self.workers < 1:
            raise ConfigurationError(f"Need at least one worker, got {self.workers}")
        if self.allocation.kind is AllocationKind.FIXED:
            # validates the fixed list against N and N_R up front
            make_allocation(self.n_total, self.n_prt, self.allocation)

    @property
    def rho_star_linear(self) -> float:
        return self.sparse.rho_star_linear


@dataclass(frozen=True)
class MethodOutcome:
    """What one method achieved on one trial

    met_target is set when the PAPR is within ρ* and, for sparse-fp, the
    reserved tones also stay within the power budget.
    """

    papr_db: float
    active_prt: int
    status: str
    millis: float
    met_target: bool = False


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    outcomes: Dict[Method, MethodOutcome]


@dataclass(frozen=True, eq=False)
class CampaignResult:
    config: CampaignConfig
    records: List[TrialRecord]
    ecdf: Dict[Method, List[Tuple[float, float]]]
    pmf: Dict[Method, List[Tuple[int, float]]]
    success_rate: Dict[Method, float]

    @property
    def methods(self) -> Tuple[Method, ...]:
        return self.config.methods

    def papr_db(self, method: Method) -> List[float]:
        return [record.outcomes[method].papr_db for record in self.records]

    def active_counts(self, method: Method) -> List[int]:
        return [record.outcomes[method].active_prt for record in self.records]

    def required_counts(self, method: Method) -> List[int]:
        """Active reserved tones on the trials where the method met the target"""
        return [
            record.outcomes[method].active_prt for record in self.records if record.outcomes[method].met_target
        ]

    def mean_active(self, method: Method) -> float:
        """Mean of `required_counts`, NaN when no trial met the target"""
        counts = self.required_counts(method)
        return float(np.mean(counts)) if counts else math.nan

    def mode_active(self, method: Method) -> Optional[int]:
        counts = self.required_counts(method)
        return mode(counts) if counts else None


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based stream of one trial, independent of execution order"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,))))


def meets_target(papr_db: float, rho_star_linear: float) -> bool:
    return 10.0 ** (papr_db / 10.0) <= rho_star_linear * (1 + PAPR_SLACK)


class _Timer:
    def __init__(self, enabled: bool) -> None:
        self._start = Timespec.get_monotonic_time() if enabled else None

    def millis(self) -> float:
        if self._start is None:
            return 0.0
        return Timespec.get_monotonic_time().millis_since(self._start)


def _measure(d: FreqVector, r: FreqVector, alloc: ToneAllocation, oversampling: int) -> float:
    x_freq, _ = compose(d, r, alloc)
    return papr_oversampled(x_freq, oversampling).db


def run_trial(cfg: CampaignConfig, trial: int) -> TrialRecord:
    """Draw one allocation and data symbol and push it through every method"""
    rng = trial_rng(cfg.seed, trial)
    alloc = make_allocation(cfg.n_total, cfg.n_prt, cfg.allocation, rng=rng)
    d = gen_data_symbols(alloc, cfg.constellation, rng)
    timer = _Timer(cfg.record_timing)
    raw_db = _measure(d, FreqVector.zeros(cfg.n_total), alloc, cfg.oversampling)
    raw_millis = timer.millis()

    outcomes: Dict[Method, MethodOutcome] = {}
    if Method.NONE in cfg.methods:
        outcomes[Method.NONE] = MethodOutcome(raw_db, 0, "Raw", raw_millis, meets_target(raw_db, cfg.rho_star_linear))

    init: Optional[SotaResult] = None
    init_millis = 0.0
    if Method.SOTA in cfg.methods or Method.SPARSE_FP in cfg.methods:
        timer = _Timer(cfg.record_timing)
        try:
            init = reduce_sota(d, alloc, cfg.sparse.sota)
        except SolverError as e:
            logger.warning("Trial %d: peak minimization failed: %s", trial, e)
        init_millis = timer.millis()

    if Method.SOTA in cfg.methods:
        if init is None:
            outcomes[Method.SOTA] = MethodOutcome(raw_db, 0, FAILURE_STATUS, init_millis)
        else:
            sota_db = _measure(d, init.r_freq, alloc, cfg.oversampling)
            outcomes[Method.SOTA] = MethodOutcome(
                sota_db,
                int(init.active_prt.size),
                init.status.value,
                init_millis,
                meets_target(sota_db, cfg.rho_star_linear),
            )

    if Method.SPARSE_FP in cfg.methods:
        timer = _Timer(cfg.record_timing)
        outcome = MethodOutcome(raw_db, 0, FAILURE_STATUS, init_millis)
        if init is not None:
            try:
                result = reduce_sparse(d, alloc, cfg.sparse, init=init)
            except SolverError as e:
                logger.warning("Trial %d: sparsification failed: %s", trial, e)
            else:
                sparse_db = _measure(d, result.r_freq, alloc, cfg.oversampling)
                outcome = MethodOutcome(
                    sparse_db,
                    result.n_active,
                    result.status.value,
                    init_millis + timer.millis(),
                    meets_target(sparse_db, cfg.rho_star_linear) and result.within_budget,
                )
        outcomes[Method.SPARSE_FP] = outcome

    return TrialRecord(trial, outcomes)


class TrialExecutor:
    def __init__(self, workers: int, kind: ExecutorKind = ExecutorKind.THREAD) -> None:
        """Runs trials inline, on a thread pool or on a process pool

        Results always come back in submission order, so the aggregation
        does not depend on the number of workers.

        :param workers:
            Degree of parallelism; 1 runs everything in the calling thread.
        :param kind:
            Pool flavour used when workers > 1.
        """
        self._pool: Optional[concurrent.futures.Executor] = None
        if workers > 1:
            if kind is ExecutorKind.PROCESS:
                self._pool = concurrent.futures.ProcessPoolExecutor(max_workers=workers)
            else:
                self._pool = concurrent.futures.ThreadPoolExecutor(max_workers=workers)

    def map(self, fn: Callable[[int], _T], items: Iterable[int]) -> Iterator[_T]:
        if self._pool is None:
            return map(fn, items)
        return self._pool.map(fn, items)

    def destroy(self) -> None:
        """Shut the pool down, waiting for running trials"""
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def __enter__(self) -> "TrialExecutor":
        """Use the executor in a context manager"""
        return self

    def __exit__(self, exc_type, exc_value, exc_tb) -> None:
        """Shut down the pool when exiting the context"""
        self.destroy()


def aggregate(cfg: CampaignConfig, records: List[TrialRecord]) -> CampaignResult:
    """Fold trial records, in trial order, into the campaign statistics

    The PAPR distribution covers every trial.  The distribution of active
    reserved tones covers the trials that met the target, the tones a method
    needed to get there; it is empty when no trial did.
    """
    ecdfs = {}
    pmfs = {}
    success = {}
    for method in cfg.methods:
        outcomes = [record.outcomes[method] for record in records]
        needed = [o.active_prt for o in outcomes if o.met_target]
        ecdfs[method] = ecdf([o.papr_db for o in outcomes])
        pmfs[method] = pmf(needed) if needed else []
        success[method] = len(needed) / len(outcomes)
    return CampaignResult(cfg, records, ecdfs, pmfs, success)


def run_campaign(cfg: CampaignConfig) -> CampaignResult:
    """Run every trial of a campaign and summarize the results"""
    logger.info(
        "Campaign: N=%d, N_R=%d, %s, %d trials, seed %d, target %.2f dB, methods %s",
        cfg.n_total,
        cfg.n_prt,
        cfg.constellation.value,
        cfg.n_trials,
        cfg.seed,
        cfg.sparse.rho_star_db,
        ", ".join(m.value for m in cfg.methods),
    )
    progress_every = max(1, cfg.n_trials // 10)
    records: List[TrialRecord] = []
    with TrialExecutor(cfg.workers, cfg.executor) as executor:
        for record in executor.map(partial(run_trial, cfg), range(cfg.n_trials)):
            records.append(record)
            if len(records) % progress_every == 0:
                logger.info("Finished %d/%d trials", len(records), cfg.n_trials)

    result = aggregate(cfg, records)
    for method in cfg.methods:
        logger.info(
            "%s: success rate %.3f, mean active tones %.2f",
            method.value,
            result.success_rate[method],
            result.mean_active(method),
        )
    return result


def sweep_configs(base: CampaignConfig, n_values: Sequence[int]) -> List[CampaignConfig]:
    """Campaign configurations over system sizes at the base reserved tone ratio"""
    if base.allocation.kind is AllocationKind.FIXED:
        raise ConfigurationError("A size sweep needs the random allocation strategy")
    if not n_values:
        raise ConfigurationError("A size sweep needs at least one system size")
    ratio = base.n_prt / base.n_total
    configs = []
    for n_total in n_values:
        n_prt = max(1, int(round(n_total * ratio)))
        configs.append(dataclasses.replace(base, n_total=int(n_total), n_prt=n_prt))
    return configs


def run_sweep(base: CampaignConfig, n_values: Sequence[int]) -> List[CampaignResult]:
    """One campaign per system size, sharing seed and settings"""
    return [run_campaign(cfg) for cfg in sweep_configs(base, n_values)]
