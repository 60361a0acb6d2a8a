# Copyright (c) 2026 The toneres developers

from .sota import SotaConfig, SotaResult, reduce_sota  # noqa: F401
from .sparse_fp import (  # noqa: F401
    FpIterate,
    ReductionResult,
    ReductionStatus,
    SparseFpConfig,
    enforce_sparsity,
    l0_quadratic_transform,
    l0_surrogate,
    reduce_sparse,
    update_gamma,
    update_zeta,
)
