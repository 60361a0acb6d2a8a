# Copyright (c) 2026 The toneres developers

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from toneres.conic.solver import SolveOutcome


class ToneresError(Exception):
    """Base class for every error raised by toneres"""


class ConfigurationError(ToneresError, ValueError):
    """Invalid lengths, ranges, allocations or configuration files"""


class UndefinedPaprError(ToneresError, ValueError):
    """The PAPR (or a quantity normalized by the peak) of an all-zero signal"""


class SupportViolationError(ToneresError, ValueError):
    """Data symbols on reserved tones, or reserved symbols on data tones"""


class SolverError(ToneresError, RuntimeError):
    def __init__(self, message: str, outcome: Optional["SolveOutcome"] = None) -> None:
        """A conic solve that did not produce a usable answer

        :param message:
            What was being solved when the failure happened.
        :param outcome:
            The solver outcome, kept for diagnostics.
        """
        if outcome is not None:
            message = f"{message} (status {outcome.status.value}, residual {outcome.kkt_residual:.3g})"
        super().__init__(message)
        self.outcome = outcome
