# Copyright (c) 2026 The toneres developers

import enum
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import cvxpy as cp
import numpy as np

from toneres.errors import ConfigurationError
from toneres.util.log import logger
from .problem import EpigraphProblem, evaluate_violation


@enum.unique
class SolveStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    ITERATION_LIMIT = "IterationLimit"
    NUMERICAL_FAILURE = "NumericalFailure"


@dataclass(frozen=True)
class SolverTolerances:
    """Accuracy and back-end selection for the conic solves

    :param feasibility:
        Primal/dual feasibility tolerance handed to the back-end.
    :param kkt:
        Duality gap tolerance handed to the back-end.
    :param max_iters:
        Iteration cap of the interior point back-ends.
    :param recheck:
        Absolute tolerance of the independent constraint re-check every
        optimal answer must pass.
    :param solvers:
        Back-ends to try, in order.  Ones that are not installed are skipped.
    :param verbose:
        Let the back-ends print their own iteration logs.
    """

    feasibility: float = 1e-8
    kkt: float = 1e-8
    max_iters: int = 200
    recheck: float = 1e-6
    solvers: Tuple[str, ...] = ("CLARABEL", "ECOS", "SCS")
    verbose: bool = False

    def __post_init__(self) -> None:
        if not (self.feasibility > 0 and self.kkt > 0 and self.recheck > 0):
            raise ConfigurationError("Solver tolerances must be positive")
        if self.max_iters < 1:
            raise ConfigurationError(f"Solver iteration cap must be at least 1, got {self.max_iters}")
        if not self.solvers:
            raise ConfigurationError("At least one solver must be configured")


@dataclass(frozen=True, eq=False)
class SolveOutcome:
    """Result of one conic solve

    `kkt_residual` is the largest constraint violation measured outside the
    solver; an OPTIMAL outcome always has it within the re-check tolerance.
    """

    status: SolveStatus
    primal: Optional[np.ndarray]
    objective_value: float
    kkt_residual: float
    solver: str = ""
    iterations: int = 0

    @property
    def ok(self) -> bool:
        return self.status is SolveStatus.OPTIMAL


def _solver_options(name: str, tol: SolverTolerances) -> Dict[str, Any]:
    if name == "CLARABEL":
        return dict(tol_feas=tol.feasibility, tol_gap_abs=tol.kkt, tol_gap_rel=tol.kkt, max_iter=tol.max_iters)
    if name == "ECOS":
        return dict(feastol=tol.feasibility, abstol=tol.kkt, reltol=tol.kkt, max_iters=tol.max_iters)
    if name == "SCS":
        # first-order method, needs far more (cheaper) iterations
        return dict(eps_abs=tol.kkt, eps_rel=tol.kkt, max_iters=100 * tol.max_iters)
    return {}


def _formulate(problem: EpigraphProblem) -> Tuple[cp.Problem, cp.Variable]:
    z = cp.Variable(problem.dim)

    objective = problem.objective_linear @ z
    support = np.flatnonzero(problem.objective_diag > 0)
    if support.size:
        objective = objective + cp.sum_squares(cp.multiply(np.sqrt(problem.objective_diag[support]), z[support]))

    constraints: List[cp.Constraint] = []
    for cone in problem.cones:
        if not cone.count:
            continue
        rows = [cone.a[:, j, :] @ z + cone.b[:, j] for j in range(cone.b.shape[1])]
        constraints.append(cp.SOC(cone.c @ z + cone.d, cp.vstack(rows), axis=0))
    for quad in problem.quadratics:
        support = np.flatnonzero(quad.q > 0)
        expr = quad.a @ z + quad.c
        if support.size:
            expr = expr + cp.sum_squares(cp.multiply(np.sqrt(quad.q[support]), z[support]))
        constraints.append(expr <= 0)

    return cp.Problem(cp.Minimize(objective), constraints), z


def _solve_with(problem: EpigraphProblem, name: str, tol: SolverTolerances) -> SolveOutcome:
    program, z = _formulate(problem)
    try:
        program.solve(solver=name, verbose=tol.verbose, **_solver_options(name, tol))
    except cp.SolverError as e:
        logger.warning("Solver %s failed on %s: %s", name, problem.name, e)
        return SolveOutcome(SolveStatus.NUMERICAL_FAILURE, None, math.nan, math.inf, solver=name)

    stats = program.solver_stats
    iterations = int(stats.num_iters) if stats is not None and stats.num_iters is not None else 0

    if program.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        return SolveOutcome(SolveStatus.INFEASIBLE, None, math.nan, math.inf, solver=name, iterations=iterations)

    if z.value is None:
        status = SolveStatus.ITERATION_LIMIT if program.status == cp.USER_LIMIT else SolveStatus.NUMERICAL_FAILURE
        return SolveOutcome(status, None, math.nan, math.inf, solver=name, iterations=iterations)

    primal = np.array(z.value, dtype=float)
    residual = evaluate_violation(problem, primal)
    objective = problem.reported_objective(primal)

    if program.status in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE) and residual <= tol.recheck:
        status = SolveStatus.OPTIMAL
    elif program.status == cp.USER_LIMIT:
        status = SolveStatus.ITERATION_LIMIT
    else:
        logger.warning(
            "Solver %s returned %s on %s with constraint violation %.3g", name, program.status, problem.name, residual
        )
        status = SolveStatus.NUMERICAL_FAILURE
    return SolveOutcome(status, primal, objective, residual, solver=name, iterations=iterations)


def solve(problem: EpigraphProblem, tol: Optional[SolverTolerances] = None) -> SolveOutcome:
    """Solve an epigraph problem, falling back through the configured back-ends

    An infeasibility certificate is final.  Iteration limits and numerical
    failures move on to the next back-end; if none succeeds the last outcome
    is returned.
    """
    if tol is None:
        tol = SolverTolerances()

    available = set(cp.installed_solvers())
    names = [name for name in tol.solvers if name in available]
    if not names:
        raise ConfigurationError(f"None of the configured solvers {tol.solvers} is installed")

    outcome: Optional[SolveOutcome] = None
    for name in names:
        outcome = _solve_with(problem, name, tol)
        if outcome.status in (SolveStatus.OPTIMAL, SolveStatus.INFEASIBLE):
            break
        logger.info("Solver %s gave %s on %s, trying the next one", name, outcome.status.value, problem.name)

    assert outcome is not None
    logger.debug(
        "%s solved by %s: %s, objective %.10g, residual %.3g",
        problem.name,
        outcome.solver,
        outcome.status.value,
        outcome.objective_value,
        outcome.kkt_residual,
    )
    return outcome
