# Copyright (c) 2026 The toneres developers

"""Embedded oracle suite

Each check compares a piece of the library against an independent,
brute-force evaluation: direct DFT sums, grid searches over a single
reserved tone, and the closed-form identities behind the auxiliary
variable updates.
"""

from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from toneres.conic import SolverTolerances, build_fp_step, build_minimax_peak, papr_surrogate, solve
from toneres.ofdm import FreqVector, TimeSignal, ToneAllocation, dft, idft, papr
from toneres.reduction import enforce_sparsity, l0_quadratic_transform, l0_surrogate, update_gamma, update_zeta
from toneres.util.log import logger

Transform = Callable[[FreqVector], TimeSignal]

GRID_POINTS = 41
GRID_LEVELS = 12
GRID_SHRINK = 0.2


def direct_idft(values: np.ndarray) -> np.ndarray:
    """x_k = (1/√N)·Σ_n v_n·exp(+j2πnk/N), summed term by term"""
    n = values.size
    out = np.zeros(n, dtype=np.complex128)
    for k in range(n):
        for m in range(n):
            out[k] += values[m] * np.exp(2j * np.pi * m * k / n)
    return out / np.sqrt(n)


def direct_dft(values: np.ndarray) -> np.ndarray:
    """v_n = (1/√N)·Σ_k x_k·exp(−j2πnk/N), summed term by term"""
    return np.conj(direct_idft(np.conj(values)))


def _grid_minimize(
    cost: Callable[[np.ndarray], np.ndarray], center: complex, width: float
) -> Tuple[complex, float]:
    """Minimize a convex cost of one complex variable by shrinking grids

    cost maps an array of candidate points to costs, inf where infeasible.
    """
    best_point, best_cost = center, float(cost(np.array([center]))[0])
    for _ in range(GRID_LEVELS):
        axis = np.linspace(-width, width, GRID_POINTS)
        points = (center + axis[:, None] + 1j * axis[None, :]).ravel()
        costs = cost(points)
        i = int(np.argmin(costs))
        if costs[i] < best_cost:
            best_point, best_cost = complex(points[i]), float(costs[i])
        center = best_point
        width *= GRID_SHRINK
    return best_point, best_cost


def _tone_waveform(n_total: int, tone: int) -> np.ndarray:
    return np.exp(2j * np.pi * tone * np.arange(n_total) / n_total) / np.sqrt(n_total)


def grid_search_minimax(d_time: np.ndarray, tone: int, cap: float) -> float:
    """Smallest peak |d + r·b|∞ over one reserved tone with |r| ≤ cap"""
    basis = _tone_waveform(d_time.size, tone)

    def cost(points: np.ndarray) -> np.ndarray:
        peaks = np.max(np.abs(d_time[None, :] + points[:, None] * basis[None, :]), axis=1)
        return np.where(np.abs(points) <= cap, peaks, np.inf)

    return _grid_minimize(cost, 0j, max(cap, 1e-12))[1]


def grid_search_fp_step(
    d_time: np.ndarray,
    tone: int,
    gamma_sq: float,
    zeta: np.ndarray,
    p_max: float,
    rho_star_linear: float,
    start: complex = 0j,
) -> float:
    """Smallest γ²|r|² over one reserved tone meeting the power and surrogate constraints

    The search starts from `start`, ideally a known feasible point.
    """
    basis = _tone_waveform(d_time.size, tone)
    target = d_time.size / rho_star_linear
    zeta_sq = float(np.vdot(zeta, zeta).real)

    def cost(points: np.ndarray) -> np.ndarray:
        x = d_time[None, :] + points[:, None] * basis[None, :]
        peak = np.max(np.abs(x), axis=1)
        surrogate = 2.0 * (np.conj(zeta)[None, :] * x).sum(axis=1).real - zeta_sq * peak ** 2
        feasible = (np.abs(points) ** 2 <= p_max * (1 + 1e-12)) & (surrogate >= target * (1 - 1e-12))
        return np.where(feasible, gamma_sq * np.abs(points) ** 2, np.inf)

    return _grid_minimize(cost, start, 2.0 * np.sqrt(p_max))[1]


def random_qpsk(n_total: int, alloc: ToneAllocation, rng: np.random.Generator) -> FreqVector:
    values = np.zeros(n_total, dtype=np.complex128)
    values[alloc.data_idx] = (rng.choice([-1.0, 1.0], alloc.n_data) + 1j * rng.choice([-1.0, 1.0], alloc.n_data))
    return FreqVector(values / np.sqrt(2))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


class SelfCheck:
    def __init__(self, seed: int = 0, transform: Transform = idft, instances: int = 20) -> None:
        """The oracle suite

        :param seed:
            Seed of the random instances.
        :param transform:
            The inverse DFT under test.  Replacing it lets the suite be
            checked against a deliberately broken transform.
        :param instances:
            Number of random single-tone instances per grid-search check.
        """
        self._seed = seed
        self._transform = transform
        self._instances = instances
        self._tol = SolverTolerances()

    def _rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self._seed, salt])

    def check_unitarity(self) -> Tuple[bool, str]:
        rng = self._rng(1)
        worst = 0.0
        for n in (4, 8, 16, 64):
            v = FreqVector(rng.standard_normal(n) + 1j * rng.standard_normal(n))
            x = self._transform(v)
            worst = max(worst, abs(np.linalg.norm(x.values) - np.linalg.norm(v.values)) / np.linalg.norm(v.values))
            back = dft(x)
            worst = max(worst, np.linalg.norm(back.values - v.values) / np.linalg.norm(v.values))
        return worst <= 1e-10, f"worst relative error {worst:.3g}"

    def check_direct_sum(self) -> Tuple[bool, str]:
        rng = self._rng(2)
        worst = 0.0
        for n in (4, 8, 16, 64):
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            x = self._transform(FreqVector(v)).values
            worst = max(worst, float(np.max(np.abs(x - direct_idft(v)))))
            worst = max(worst, float(np.max(np.abs(dft(TimeSignal(v)).values - direct_dft(v)))))
        return worst <= 1e-10, f"worst deviation {worst:.3g}"

    def check_papr_properties(self) -> Tuple[bool, str]:
        rng = self._rng(3)
        for n in (4, 8, 128):
            x = TimeSignal(rng.standard_normal(n) + 1j * rng.standard_normal(n))
            value = papr(x).linear
            if not 1.0 - 1e-12 <= value <= n * (1.0 + 1e-12):
                return False, f"PAPR {value} outside [1, {n}]"
            scaled = papr(TimeSignal(x.values * (0.3 - 2.1j))).linear
            if abs(scaled - value) > 1e-12 * value:
                return False, f"PAPR changed under scaling: {value} vs {scaled}"
        return True, "bounds and scale invariance hold"

    def check_minimax_grid(self) -> Tuple[bool, str]:
        rng = self._rng(4)
        worst = 0.0
        for _ in range(self._instances):
            tone = int(rng.integers(4))
            alloc = ToneAllocation(4, [tone])
            d = random_qpsk(4, alloc, rng)
            omega = float(rng.uniform(0.05, 3.0))
            d_time = self._transform(d)
            problem = build_minimax_peak(d_time, alloc, omega)
            outcome = solve(problem, self._tol)
            if not outcome.ok:
                return False, f"solver returned {outcome.status.value}"
            cap = problem.cones[1].d[0]
            peak = np.sqrt(max(outcome.objective_value, 0.0))
            worst = max(worst, abs(peak - grid_search_minimax(d_time.values, tone, cap)))
        return worst <= 1e-3, f"worst peak gap {worst:.3g}"

    def check_fp_step_grid(self) -> Tuple[bool, str]:
        rng = self._rng(5)
        worst = 0.0
        for _ in range(self._instances):
            tone = int(rng.integers(4))
            alloc = ToneAllocation(4, [tone])
            d = random_qpsk(4, alloc, rng)
            d_time = self._transform(d)
            r0 = complex(rng.standard_normal() + 1j * rng.standard_normal())
            x0 = d_time.values + r0 * _tone_waveform(4, tone)
            zeta = update_zeta(TimeSignal(x0))
            rho_star = papr(TimeSignal(x0)).linear
            p_max = 2.0 * abs(r0) ** 2
            gamma_sq = float(rng.uniform(0.5, 2.0))
            problem = build_fp_step(d_time, alloc, np.array([gamma_sq]), zeta, p_max, rho_star)
            outcome = solve(problem, self._tol)
            if not outcome.ok:
                return False, f"solver returned {outcome.status.value}"
            oracle = grid_search_fp_step(d_time.values, tone, gamma_sq, zeta, p_max, rho_star, start=r0)
            worst = max(worst, abs(outcome.objective_value - oracle))
        return worst <= 1e-3, f"worst objective gap {worst:.3g}"

    def check_gamma_identity(self) -> Tuple[bool, str]:
        rng = self._rng(6)
        worst = 0.0
        for _ in range(1000):
            r = rng.standard_normal(20) + 1j * rng.standard_normal(20)
            r[rng.random(20) < 0.3] = 0
            alpha = float(10.0 ** rng.uniform(-6, 0))
            gap = l0_quadratic_transform(r, update_gamma(r, alpha), alpha) - l0_surrogate(r, alpha)
            worst = max(worst, abs(gap))
        return worst <= 1e-12, f"worst gap {worst:.3g}"

    def check_zeta_identity(self) -> Tuple[bool, str]:
        rng = self._rng(7)
        worst = 0.0
        for _ in range(1000):
            n = int(rng.integers(2, 129))
            x = TimeSignal(rng.standard_normal(n) + 1j * rng.standard_normal(n))
            value = papr_surrogate(update_zeta(x), x.values)
            worst = max(worst, abs(value - n / papr(x).linear))
        return worst <= 1e-10, f"worst gap {worst:.3g}"

    def check_threshold_idempotence(self) -> Tuple[bool, str]:
        rng = self._rng(8)
        for _ in range(100):
            r = FreqVector((rng.standard_normal(16) + 1j * rng.standard_normal(16)) * 10.0 ** rng.uniform(-5, 0, 16))
            once = enforce_sparsity(r, 7e-4)
            if enforce_sparsity(once, 7e-4) != once:
                return False, "thresholding twice differs from once"
        return True, "idempotent"

    def checks(self) -> List[Tuple[str, Callable[[], Tuple[bool, str]]]]:
        return [
            ("unitarity", self.check_unitarity),
            ("dft-direct-sum", self.check_direct_sum),
            ("papr-properties", self.check_papr_properties),
            ("minimax-grid-search", self.check_minimax_grid),
            ("fp-step-grid-search", self.check_fp_step_grid),
            ("gamma-identity", self.check_gamma_identity),
            ("zeta-identity", self.check_zeta_identity),
            ("threshold-idempotence", self.check_threshold_idempotence),
        ]

    def run(self) -> List[CheckResult]:
        """Run every check, returning one result per check in order"""
        results = []
        for name, check in self.checks():
            try:
                passed, detail = check()
            except Exception as e:  # a crashing check is a failing check
                passed, detail = False, f"{type(e).__name__}: {e}"
            logger.info("%s: %s (%s)", name, "pass" if passed else "FAIL", detail)
            results.append(CheckResult(name, passed, detail))
        return results
