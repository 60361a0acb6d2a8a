# Copyright (c) 2026 The toneres developers

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np

from toneres.conic import build_fp_step, papr_surrogate, solve
from toneres.errors import ConfigurationError, UndefinedPaprError
from toneres.ofdm import (
    FreqVector,
    PaprValue,
    TimeSignal,
    ToneAllocation,
    check_data_support,
    compose,
    db_to_linear,
    idft,
    papr,
)
from toneres.util.log import logger
from .sota import SotaConfig, SotaResult, reduce_sota

PAPR_SLACK = 1e-4
POWER_SLACK = 1e-6


@dataclass(frozen=True)
class SparseFpConfig:
    """Settings of the reserved tone sparsification

    :param rho_star_db:
        Target PAPR ρ* in dB.  Values below 0 dB can never be met.
    :param p_max:
        Total reserved tone power budget.  None derives it from budget_gap.
    :param budget_gap:
        Power each reserved tone may carry on average, relative to the mean
        data tone power ‖d̃‖₂²/(N−N_R), when p_max is not given.  At 1 the
        reserved tones together carry what N_R data tones would, so the symbol
        keeps the power of a fully loaded one.  Setting it to Ω gives the total
        implied by the per-tone cap of the initializer, which makes the
        initial point always power feasible.
    :param alpha:
        Tightness of the smooth ℓ0 approximation.
    :param epsilon:
        Reserved tones with a smaller magnitude are forced to zero.
    :param max_fp_iters:
        Cap on the number of convexified steps.
    :param convergence_tol:
        Relative change of r below which the iteration stops.
    :param threshold_final_only:
        Force small tones to zero once after the loop instead of after every
        step.
    :param sota:
        Settings of the initializer, whose solver tolerances are reused for
        every step.
    """

    rho_star_db: float = 6.0
    p_max: Optional[float] = None
    budget_gap: float = 1.0
    alpha: float = 1e-4
    epsilon: float = 7e-4
    max_fp_iters: int = 20
    convergence_tol: float = 1e-5
    threshold_final_only: bool = False
    sota: SotaConfig = field(default_factory=SotaConfig)
    rho_star_linear: float = field(init=False)

    def __post_init__(self) -> None:
        if not math.isfinite(self.rho_star_db):
            raise ConfigurationError(f"Target PAPR must be finite, got {self.rho_star_db}")
        if self.p_max is not None and not self.p_max > 0:
            raise ConfigurationError(f"Power budget must be positive, got {self.p_max}")
        if not self.budget_gap > 0:
            raise ConfigurationError(f"Power budget gap must be positive, got {self.budget_gap}")
        if not self.alpha > 0:
            raise ConfigurationError(f"ℓ0 approximation parameter must be positive, got {self.alpha}")
        if not self.epsilon > 0:
            raise ConfigurationError(f"Zero-forcing tolerance must be positive, got {self.epsilon}")
        if self.max_fp_iters < 1:
            raise ConfigurationError(f"Need at least one iteration, got {self.max_fp_iters}")
        if not self.convergence_tol > 0:
            raise ConfigurationError(f"Convergence tolerance must be positive, got {self.convergence_tol}")
        object.__setattr__(self, "rho_star_linear", db_to_linear(self.rho_star_db))

    def budget(self, d: FreqVector, alloc: ToneAllocation) -> float:
        """The power budget P_max used for the given data symbol"""
        if self.p_max is not None:
            return self.p_max
        return self.budget_gap * alloc.n_prt / alloc.n_data * d.energy


@enum.unique
class ReductionStatus(enum.Enum):
    REFINED = "Refined"
    FALLBACK_TO_INIT = "FallbackToInit"


@dataclass(frozen=True, eq=False)
class FpIterate:
    """One point of the iteration with the auxiliary variables it induces

    gamma_sq and zeta are computed from r_freq itself, so they are the
    weights and the auxiliary vector of the following step.
    """

    r_freq: FreqVector
    gamma_sq: np.ndarray
    zeta: np.ndarray
    surrogate_l0: float
    papr: PaprValue
    papr_surrogate: float
    step: float


@dataclass(frozen=True, eq=False)
class ReductionResult:
    r_freq: FreqVector
    status: ReductionStatus
    active_prt: np.ndarray
    freed_prt: np.ndarray
    achieved_papr: Optional[PaprValue]
    iterations: int
    trace: List[FpIterate]
    init: SotaResult
    p_max: float
    rho_star_linear: float

    @property
    def n_active(self) -> int:
        return int(self.active_prt.size)

    @property
    def within_budget(self) -> bool:
        """True when r respects P_max; a fallback to the initializer may not"""
        return self.r_freq.energy <= self.p_max * (1 + POWER_SLACK)

    def to_record(self) -> Dict[str, Any]:
        """A flat, serializable summary of the reduction"""
        return {
            "status": self.status.value,
            "papr_db": None if self.achieved_papr is None else self.achieved_papr.db,
            "n_active": self.n_active,
            "active_prt": self.active_prt.tolist(),
            "freed_prt": self.freed_prt.tolist(),
            "iterations": self.iterations,
            "prt_power": self.r_freq.energy,
            "p_max": self.p_max,
        }


def _magnitudes_sq(r: Union[FreqVector, np.ndarray]) -> np.ndarray:
    values = r.values if isinstance(r, FreqVector) else np.asarray(r)
    return np.abs(values) ** 2


def l0_surrogate(r: Union[FreqVector, np.ndarray], alpha: float) -> float:
    """Smooth count of nonzero entries, Σ |r_n|²/(|r_n|² + α)"""
    if not alpha > 0:
        raise ConfigurationError(f"ℓ0 approximation parameter must be positive, got {alpha}")
    mag = _magnitudes_sq(r)
    return float(np.sum(mag / (mag + alpha)))


def update_gamma(r: Union[FreqVector, np.ndarray], alpha: float) -> np.ndarray:
    """Squared weights γ_n² with γ_n = √α/(|r_n|² + α)

    Pass the reserved tone values only; each weight lies in (0, 1/α].
    """
    if not alpha > 0:
        raise ConfigurationError(f"ℓ0 approximation parameter must be positive, got {alpha}")
    gamma = math.sqrt(alpha) / (_magnitudes_sq(r) + alpha)
    return gamma ** 2


def l0_quadratic_transform(r: Union[FreqVector, np.ndarray], gamma_sq: np.ndarray, alpha: float) -> float:
    """The ℓ0 approximation rewritten with explicit weights

    N_R − Σ (2γ_n√α − γ_n²(|r_n|² + α)).  It upper-bounds `l0_surrogate` for
    any weights and is tight when the weights come from `update_gamma(r)`.
    """
    mag = _magnitudes_sq(r)
    gamma = np.sqrt(np.asarray(gamma_sq, dtype=float))
    return float(mag.size - np.sum(2.0 * gamma * math.sqrt(alpha) - gamma ** 2 * (mag + alpha)))


def update_zeta(x: TimeSignal) -> np.ndarray:
    """Auxiliary vector ζ = x/‖x‖∞²"""
    peak_sq = float(np.max(np.abs(x.values)) ** 2)
    if peak_sq == 0.0:
        raise UndefinedPaprError("Auxiliary vector of an all-zero signal is undefined")
    return x.values / peak_sq


def enforce_sparsity(r: FreqVector, epsilon: float) -> FreqVector:
    """Zero every entry with |r_n| < ε; entries at exactly ε are kept"""
    if not epsilon > 0:
        raise ConfigurationError(f"Zero-forcing tolerance must be positive, got {epsilon}")
    values = np.where(np.abs(r.values) >= epsilon, r.values, 0)
    return FreqVector(values)


def _iterate(d: FreqVector, r: FreqVector, alloc: ToneAllocation, alpha: float, step: float) -> FpIterate:
    _, x = compose(d, r, alloc)
    zeta = update_zeta(x)
    tones = alloc.restrict(r)
    return FpIterate(
        r_freq=r,
        gamma_sq=update_gamma(tones, alpha),
        zeta=zeta,
        surrogate_l0=l0_surrogate(tones, alpha),
        papr=papr(x),
        papr_surrogate=papr_surrogate(zeta, x.values),
        step=step,
    )


def _result(
    r: FreqVector,
    status: ReductionStatus,
    achieved: Optional[PaprValue],
    trace: List[FpIterate],
    init: SotaResult,
    alloc: ToneAllocation,
    p_max: float,
    cfg: SparseFpConfig,
) -> ReductionResult:
    prt = alloc.prt_idx
    nonzero = r.values[prt] != 0
    return ReductionResult(
        r_freq=r,
        status=status,
        active_prt=prt[nonzero],
        freed_prt=prt[~nonzero],
        achieved_papr=achieved,
        iterations=max(len(trace) - 1, 0),
        trace=trace,
        init=init,
        p_max=p_max,
        rho_star_linear=cfg.rho_star_linear,
    )


def reduce_sparse(
    d: FreqVector,
    alloc: ToneAllocation,
    cfg: SparseFpConfig,
    init: Optional[SotaResult] = None,
) -> ReductionResult:
    """Meet a target PAPR with as few reserved tones as possible

    Starting from the peak-minimizing solution, each step reweights the
    reserved tones from the current point, linearizes the PAPR constraint
    around the current waveform, solves the convex step and zero-forces
    tones below ε.  The loop stops once r settles or after max_fp_iters
    steps.

    When a step is infeasible or fails numerically, or the final thresholded
    vector misses the target PAPR or the power budget, the initializer is
    returned unchanged with status FallbackToInit.

    :param d:
        Data symbols, zero on the reserved tones.
    :param alloc:
        The tone allocation.
    :param cfg:
        Target, budget and iteration settings.
    :param init:
        A peak-minimizing solution for the same d and alloc, computed with
        `reduce_sota` when not given.
    """
    check_data_support(d, alloc)
    if init is None:
        init = reduce_sota(d, alloc, cfg.sota)
    p_max = cfg.budget(d, alloc)
    rho_star = cfg.rho_star_linear
    tol = cfg.sota.tolerances

    if d.is_zero():
        return _result(init.r_freq, ReductionStatus.FALLBACK_TO_INIT, None, [], init, alloc, p_max, cfg)

    d_time = idft(d)
    if papr(d_time).linear <= rho_star:
        # no reserved tone needed, ‖r‖₀ = 0 is the global optimum
        zeros = FreqVector.zeros(alloc.n_total)
        return _result(zeros, ReductionStatus.REFINED, papr(d_time), [], init, alloc, p_max, cfg)

    trace = [_iterate(d, init.r_freq, alloc, cfg.alpha, math.nan)]
    for k in range(1, cfg.max_fp_iters + 1):
        prev = trace[-1]
        problem = build_fp_step(d_time, alloc, prev.gamma_sq, prev.zeta, p_max, rho_star)
        outcome = solve(problem, tol)
        if not outcome.ok or outcome.primal is None:
            logger.info("Step %d ended %s, falling back to the initializer", k, outcome.status.value)
            return _result(
                init.r_freq, ReductionStatus.FALLBACK_TO_INIT, init.achieved_papr, trace, init, alloc, p_max, cfg
            )

        r = alloc.embed(problem.layout.tones(outcome.primal))
        if not cfg.threshold_final_only:
            r = enforce_sparsity(r, cfg.epsilon)

        prev_norm = math.sqrt(prev.r_freq.energy)
        step = float(np.linalg.norm(r.values - prev.r_freq.values))
        current = _iterate(d, r, alloc, cfg.alpha, step)
        trace.append(current)
        logger.debug(
            "Step %d: surrogate l0 %.6f, PAPR %.4f dB, change %.3g",
            k,
            current.surrogate_l0,
            current.papr.db,
            step,
        )
        if step <= cfg.convergence_tol * max(1.0, prev_norm):
            break

    r = trace[-1].r_freq
    if cfg.threshold_final_only:
        r = enforce_sparsity(r, cfg.epsilon)
    _, x = compose(d, r, alloc)
    achieved = papr(x)

    if achieved.linear <= rho_star * (1 + PAPR_SLACK) and r.energy <= p_max * (1 + POWER_SLACK):
        return _result(r, ReductionStatus.REFINED, achieved, trace, init, alloc, p_max, cfg)

    logger.info(
        "Thresholded solution misses the target (%.4f dB > %.4f dB), falling back to the initializer",
        achieved.db,
        cfg.rho_star_db,
    )
    return _result(init.r_freq, ReductionStatus.FALLBACK_TO_INIT, init.achieved_papr, trace, init, alloc, p_max, cfg)
