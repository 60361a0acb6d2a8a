# Copyright (c) 2026 The toneres developers

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from toneres.conic import SolverTolerances, SolveStatus, build_minimax_peak, solve
from toneres.errors import ConfigurationError, SolverError
from toneres.ofdm import FreqVector, PaprValue, ToneAllocation, check_data_support, compose, idft, papr
from toneres.util.log import logger


@dataclass(frozen=True)
class SotaConfig:
    """Settings of the per-tone capped peak minimization

    :param omega:
        Power level gap constant Ω as a linear ratio.  Each reserved tone may
        carry at most Ω/(N−N_R) times the total data power.
    """

    omega: float = 10.0
    tolerances: SolverTolerances = field(default_factory=SolverTolerances)

    def __post_init__(self) -> None:
        if not self.omega > 0:
            raise ConfigurationError(f"Power level gap constant must be positive, got {self.omega}")


@dataclass(frozen=True, eq=False)
class SotaResult:
    r_freq: FreqVector
    achieved_papr: Optional[PaprValue]
    peak_power: float
    status: SolveStatus
    alloc: ToneAllocation

    @property
    def active_prt(self) -> np.ndarray:
        """Reserved tones carrying a nonzero symbol"""
        prt = self.alloc.prt_idx
        return prt[self.r_freq.values[prt] != 0]

    @property
    def freed_prt(self) -> np.ndarray:
        """Reserved tones left empty"""
        prt = self.alloc.prt_idx
        return prt[self.r_freq.values[prt] == 0]


def reduce_sota(d: FreqVector, alloc: ToneAllocation, cfg: SotaConfig) -> SotaResult:
    """Minimize the peak power using all reserved tones

    Solves min ‖d + F_N^H r‖∞² subject to ‖r‖∞² ≤ Ω/(N−N_R)·‖d̃‖₂² over
    vectors r supported on the reserved tones.  Only the peak is minimized;
    the PAPR itself may go up or down since r adds power.

    :param d:
        Data symbols, zero on the reserved tones.
    :param alloc:
        The tone allocation.
    :param cfg:
        Ω and the solver tolerances.
    """
    check_data_support(d, alloc)
    d_time = idft(d)

    if d.is_zero():
        # the per-tone cap is zero, so the feasible set is {0}
        return SotaResult(FreqVector.zeros(alloc.n_total), None, 0.0, SolveStatus.OPTIMAL, alloc)

    problem = build_minimax_peak(d_time, alloc, cfg.omega, data_energy=d.energy)
    outcome = solve(problem, cfg.tolerances)
    if outcome.status is not SolveStatus.OPTIMAL or outcome.primal is None:
        raise SolverError(f"Peak minimization over {alloc.n_prt} reserved tones failed", outcome)

    r = alloc.embed(problem.layout.tones(outcome.primal))
    _, x = compose(d, r, alloc)
    peak_power = float(np.max(np.abs(x.values)) ** 2)

    raw_peak = float(np.max(np.abs(d_time.values)) ** 2)
    if peak_power > raw_peak:
        logger.debug(
            "Peak minimization ended above the unreduced peak (%.12g > %.12g), using r = 0", peak_power, raw_peak
        )
        r = FreqVector.zeros(alloc.n_total)
        x = d_time
        peak_power = raw_peak

    return SotaResult(r, papr(x), peak_power, outcome.status, alloc)
