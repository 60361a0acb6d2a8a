import pytest

from toneres.config import load_run_config
from toneres.errors import ConfigurationError
from toneres.montecarlo import Constellation, ExecutorKind, Method
from toneres.ofdm import AllocationKind

FULL = """
[ofdm]
n_total = 64
n_prt = 8
constellation = 16qam
oversampling = 4

[allocation]
strategy = random

[sota]
omega = 5.0

[sparse_fp]
rho_star_db = 5.5, 6.5   ; two targets
budget_gap = 2.5
alpha = 1e-3
epsilon = 1e-3
max_fp_iters = 10
convergence_tol = 1e-6
threshold_final_only = yes

[solver]
solvers = clarabel, scs
feasibility_tol = 1e-7
max_iters = 100

[campaign]
n_trials = 50
seed = 9
methods = none, sparse-fp
workers = 2
executor = process
record_timing = true

[sweep]
n_values = 32, 64
"""


def _write(tmp_path, text):
    path = tmp_path / "toneres.ini"
    path.write_text(text)
    return path


def test_defaults_without_a_file():
    run = load_run_config(None)
    cfg = run.campaign
    assert (cfg.n_total, cfg.n_prt, cfg.n_trials, cfg.seed) == (128, 20, 2000, 0)
    assert cfg.constellation is Constellation.QPSK
    assert cfg.methods == (Method.NONE, Method.SOTA, Method.SPARSE_FP)
    assert cfg.sparse.sota.omega == 10.0
    assert (cfg.sparse.alpha, cfg.sparse.epsilon) == (1e-4, 7e-4)
    assert cfg.sparse.p_max is None
    assert cfg.sparse.budget_gap == 1.0
    assert run.rho_targets_db == (6.0,)
    assert run.sweep_n_values == (64, 128, 256)


def test_full_file(tmp_path):
    run = load_run_config(_write(tmp_path, FULL))
    cfg = run.campaign
    assert (cfg.n_total, cfg.n_prt, cfg.oversampling) == (64, 8, 4)
    assert cfg.constellation is Constellation.QAM16
    assert cfg.sparse.sota.omega == 5.0
    assert cfg.sparse.threshold_final_only
    assert cfg.sparse.max_fp_iters == 10
    assert cfg.sparse.budget_gap == 2.5
    assert cfg.sparse.sota.tolerances.solvers == ("CLARABEL", "SCS")
    assert cfg.sparse.sota.tolerances.feasibility == 1e-7
    assert cfg.sparse.sota.tolerances.kkt == 1e-8
    assert (cfg.n_trials, cfg.seed, cfg.workers) == (50, 9, 2)
    assert cfg.methods == (Method.NONE, Method.SPARSE_FP)
    assert cfg.executor is ExecutorKind.PROCESS
    assert cfg.record_timing
    assert run.rho_targets_db == (5.5, 6.5)
    assert cfg.sparse.rho_star_db == 5.5
    assert run.for_target(6.5).sparse.rho_star_db == 6.5
    assert run.for_target(6.5).sparse.alpha == 1e-3
    assert run.sweep_n_values == (32, 64)


def test_overrides_win(tmp_path):
    overrides = dict(n_total=32, n_prt=4, n_trials=3, seed=1, workers=None, rho_star_db=[7.0], methods=["sota"])
    run = load_run_config(_write(tmp_path, FULL), overrides)
    cfg = run.campaign
    assert (cfg.n_total, cfg.n_prt, cfg.n_trials, cfg.seed, cfg.workers) == (32, 4, 3, 1, 2)
    assert run.rho_targets_db == (7.0,)
    assert cfg.methods == (Method.SOTA,)
    assert not cfg.sparse.sota.tolerances.verbose


def test_solver_verbosity(tmp_path):
    path = _write(tmp_path, "[solver]\nverbose = yes\n")
    assert load_run_config(path).campaign.sparse.sota.tolerances.verbose
    assert load_run_config(None, dict(solver_verbose=True)).campaign.sparse.sota.tolerances.verbose
    assert not load_run_config(None).campaign.sparse.sota.tolerances.verbose


def test_fixed_allocation(tmp_path):
    path = _write(tmp_path, "[ofdm]\nn_total = 8\nn_prt = 2\n[allocation]\nstrategy = fixed\nindices = 1, 5\n")
    allocation = load_run_config(path).campaign.allocation
    assert allocation.kind is AllocationKind.FIXED
    assert allocation.indices == (1, 5)


def test_missing_file_names_the_path(tmp_path):
    path = tmp_path / "nope.ini"
    with pytest.raises(ConfigurationError, match="nope.ini"):
        load_run_config(path)


@pytest.mark.parametrize(
    "text",
    [
        "[campaign]\nn_trials = 0\n",
        "[campaign]\nn_trial = 10\n",
        "[plots]\nstyle = dark\n",
        "[ofdm]\nn_total = many\n",
        "[ofdm]\nconstellation = 8psk\n",
        "[allocation]\nstrategy = comb\n",
        "[campaign]\nexecutor = cluster\n",
        "[campaign]\nrecord_timing = maybe\n",
        "[sparse_fp]\nalpha = -1\n",
        "[sparse_fp]\nbudget_gap = 0\n",
        "[ofdm]\nn_total = 8\nn_prt = 2\n[allocation]\nstrategy = fixed\nindices = 1\n",
        "not an ini file",
    ],
)
def test_invalid_files(tmp_path, text):
    with pytest.raises(ConfigurationError):
        load_run_config(_write(tmp_path, text))
