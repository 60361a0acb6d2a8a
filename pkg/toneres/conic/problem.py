# Copyright (c) 2026 The toneres developers

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from toneres.errors import ConfigurationError


@dataclass(frozen=True)
class VariableLayout:
    """Real embedding of the reserved tones plus the peak bound

    z = [Re r_ℛ, Im r_ℛ, t], so the dimension is 2·N_R + 1.
    """

    n_prt: int

    @property
    def dim(self) -> int:
        return 2 * self.n_prt + 1

    @property
    def re(self) -> slice:
        return slice(0, self.n_prt)

    @property
    def im(self) -> slice:
        return slice(self.n_prt, 2 * self.n_prt)

    @property
    def peak(self) -> int:
        return 2 * self.n_prt

    def tones(self, z: np.ndarray) -> np.ndarray:
        """The complex reserved tone values held in z"""
        return z[self.re] + 1j * z[self.im]

    def pack(self, tones: np.ndarray, peak: float) -> np.ndarray:
        """The point z holding the given tone values and peak bound"""
        z = np.empty(self.dim)
        z[self.re] = tones.real
        z[self.im] = tones.imag
        z[self.peak] = peak
        return z


@dataclass(frozen=True, eq=False)
class SocConstraint:
    """A family of second-order cones ‖A_i z + b_i‖₂ ≤ c_i·z + d_i, i = 0..m-1

    a has shape (m, k, n), b (m, k), c (m, n) and d (m,).
    """

    label: str
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    @property
    def count(self) -> int:
        return self.a.shape[0]

    def slack(self, z: np.ndarray) -> np.ndarray:
        """Right-hand side minus left-hand side, nonnegative when satisfied"""
        lhs = np.linalg.norm(self.a @ z + self.b, axis=1)
        return self.c @ z + self.d - lhs


@dataclass(frozen=True, eq=False)
class QuadraticConstraint:
    """Σ_j q_j z_j² + a·z + c ≤ 0 with q ≥ 0"""

    label: str
    q: np.ndarray
    a: np.ndarray
    c: float

    def value(self, z: np.ndarray) -> float:
        return float(self.q @ (z * z) + self.a @ z + self.c)


@dataclass(frozen=True, eq=False)
class EpigraphProblem:
    """minimize Σ_j p_j z_j² + f·z subject to cones and convex quadratics

    The objective matrix is diagonal and positive semidefinite.  With
    `report_squared` the solver reports the square of the optimal value, for
    problems that minimize a peak amplitude in place of a peak power.
    """

    layout: VariableLayout
    objective_diag: np.ndarray
    objective_linear: np.ndarray
    cones: Tuple[SocConstraint, ...] = ()
    quadratics: Tuple[QuadraticConstraint, ...] = ()
    name: str = "epigraph"
    report_squared: bool = False

    def __post_init__(self) -> None:
        n = self.layout.dim
        if self.objective_diag.shape != (n,) or self.objective_linear.shape != (n,):
            raise ConfigurationError(f"Objective of {self.name} must have dimension {n}")
        if np.any(self.objective_diag < 0):
            raise ConfigurationError(f"Objective matrix of {self.name} is not positive semidefinite")
        for cone in self.cones:
            m, k = cone.b.shape
            if cone.a.shape != (m, k, n) or cone.c.shape != (m, n) or cone.d.shape != (m,):
                raise ConfigurationError(f"Cone family {cone.label} of {self.name} is dimensionally inconsistent")
        for quad in self.quadratics:
            if quad.q.shape != (n,) or quad.a.shape != (n,):
                raise ConfigurationError(f"Quadratic {quad.label} of {self.name} is dimensionally inconsistent")
            if np.any(quad.q < 0):
                raise ConfigurationError(f"Quadratic {quad.label} of {self.name} is not convex")

    @property
    def dim(self) -> int:
        return self.layout.dim

    def objective(self, z: np.ndarray) -> float:
        """Objective value at z"""
        return float(self.objective_diag @ (z * z) + self.objective_linear @ z)

    def reported_objective(self, z: np.ndarray) -> float:
        value = self.objective(z)
        return value * value if self.report_squared else value


def evaluate_violation(problem: EpigraphProblem, z: np.ndarray) -> float:
    """Largest constraint violation at z, 0 when z is feasible

    This is evaluated directly from the problem data, independently of any
    solver, and is used to re-check every solution.
    """
    worst = 0.0
    for cone in problem.cones:
        if cone.count:
            worst = max(worst, float(-cone.slack(z).min()))
    for quad in problem.quadratics:
        worst = max(worst, quad.value(z))
    return worst


def _row(values: np.ndarray) -> str:
    return " ".join(f"{v:.17g}" for v in values)


def dump(problem: EpigraphProblem) -> str:
    """Plain-text rendering of a problem, one constraint row per line"""
    lines: List[str] = [
        f"problem {problem.name}",
        f"dim {problem.dim}",
        f"objective.diag {_row(problem.objective_diag)}",
        f"objective.linear {_row(problem.objective_linear)}",
    ]
    for cone in problem.cones:
        lines.append(f"cone {cone.label} count {cone.count} size {cone.b.shape[1]}")
        for i in range(cone.count):
            for j in range(cone.b.shape[1]):
                lines.append(f"  {i}.a{j} {_row(cone.a[i, j])} | b {cone.b[i, j]:.17g}")
            lines.append(f"  {i}.c {_row(cone.c[i])} | d {cone.d[i]:.17g}")
    for quad in problem.quadratics:
        lines.append(f"quadratic {quad.label}")
        lines.append(f"  q {_row(quad.q)}")
        lines.append(f"  a {_row(quad.a)}")
        lines.append(f"  c {quad.c:.17g}")
    return "\n".join(lines) + "\n"
