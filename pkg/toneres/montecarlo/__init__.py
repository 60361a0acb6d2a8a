# Copyright (c) 2026 The toneres developers

from .campaign import (  # noqa: F401
    CampaignConfig,
    CampaignResult,
    ExecutorKind,
    Method,
    MethodOutcome,
    TrialExecutor,
    TrialRecord,
    run_campaign,
    run_sweep,
    run_trial,
    sweep_configs,
    trial_rng,
)
from .constellation import Constellation, gen_data_symbols  # noqa: F401
from .output import write_campaign, write_sweep_summary  # noqa: F401
from .stats import ecdf, mode, pmf  # noqa: F401
