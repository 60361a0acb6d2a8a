# Copyright (c) 2026 The toneres developers

from .builders import build_fp_step, build_minimax_peak, papr_surrogate, tone_power_cap  # noqa: F401
from .problem import (  # noqa: F401
    EpigraphProblem,
    QuadraticConstraint,
    SocConstraint,
    VariableLayout,
    dump,
    evaluate_violation,
)
from .solver import SolveOutcome, SolverTolerances, SolveStatus, solve  # noqa: F401
