# Copyright (c) 2026 The toneres developers

import logging

logger = logging.getLogger("toneres")

_cvxpy_logger = logging.getLogger("__cvxpy__")


def log_init(log_level: int) -> None:
    """Setup the toneres logger to the specified level

    :param log_level:
        The log level to set the Python logger to for toneres.  The cvxpy
        logger follows one step quieter.  Solver iteration tables are switched
        on separately, through `SolverTolerances.verbose`.
    """
    logger.setLevel(log_level)

    if log_level <= logging.DEBUG:
        _cvxpy_logger.setLevel(logging.INFO)
    elif log_level <= logging.INFO:
        _cvxpy_logger.setLevel(logging.WARNING)
    elif log_level <= logging.ERROR:
        _cvxpy_logger.setLevel(logging.ERROR)
    else:
        _cvxpy_logger.setLevel(logging.CRITICAL)
