import math

import numpy as np
import pytest

import toneres.reduction.sparse_fp as sparse_fp
from toneres.conic import SolveOutcome, SolveStatus, papr_surrogate, solve
from toneres.errors import ConfigurationError, UndefinedPaprError
from toneres.ofdm import (
    AllocationStrategy,
    FreqVector,
    TimeSignal,
    ToneAllocation,
    compose,
    idft,
    make_allocation,
    papr,
)
from toneres.reduction import (
    ReductionStatus,
    SparseFpConfig,
    enforce_sparsity,
    l0_quadratic_transform,
    l0_surrogate,
    reduce_sota,
    reduce_sparse,
    update_gamma,
    update_zeta,
)
from toneres.selfcheck import random_qpsk


def _instance(seed, n_total=32, n_prt=6):
    rng = np.random.default_rng(seed)
    alloc = make_allocation(n_total, n_prt, AllocationStrategy.random(), rng=rng)
    return alloc, random_qpsk(n_total, alloc, rng)


def test_l0_surrogate_values():
    assert l0_surrogate(np.zeros(5), 1e-4) == 0.0
    assert l0_surrogate(np.array([1e-2, 0]), 1e-4) == pytest.approx(0.5)


def test_l0_surrogate_approaches_the_count():
    rng = np.random.default_rng(0)
    r = (0.1 + rng.random(10)) * np.exp(2j * np.pi * rng.random(10))
    r[[1, 4, 7]] = 0
    errors = []
    for alpha in (1e-2, 1e-4, 1e-6):
        error = 7 - l0_surrogate(r, alpha)
        assert 0 <= error <= 7 * alpha / np.min(np.abs(r[r != 0]) ** 2)
        errors.append(error)
    assert errors[0] > errors[1] > errors[2]


def test_l0_surrogate_needs_positive_alpha():
    with pytest.raises(ConfigurationError):
        l0_surrogate(np.ones(3), 0.0)


def test_update_gamma():
    alpha = 1e-4
    gamma_sq = update_gamma(np.array([0, 1e-2]), alpha)
    assert gamma_sq[0] == pytest.approx(1 / alpha)
    assert gamma_sq[1] == pytest.approx(1 / (4 * alpha))


def test_quadratic_transform_is_tight_at_its_weights():
    rng = np.random.default_rng(1)
    for _ in range(100):
        r = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        alpha = float(10.0 ** rng.uniform(-6, 0))
        assert abs(l0_quadratic_transform(r, update_gamma(r, alpha), alpha) - l0_surrogate(r, alpha)) <= 1e-12
        other = update_gamma(rng.standard_normal(12), alpha)
        assert l0_quadratic_transform(r, other, alpha) >= l0_surrogate(r, alpha) - 1e-12


def test_update_zeta():
    x = TimeSignal([1, 0.5j, -0.25, 0])
    assert np.allclose(update_zeta(x), x.values)
    assert np.allclose(update_zeta(TimeSignal(3 * x.values)), x.values / 3)
    assert papr_surrogate(update_zeta(x), x.values) == pytest.approx(4 / papr(x).linear, rel=1e-12)
    with pytest.raises(UndefinedPaprError):
        update_zeta(TimeSignal.zeros(4))


def test_enforce_sparsity_boundaries():
    eps = 7e-4
    r = FreqVector([2 * eps, eps, eps / 2, 0, -eps * 1j])
    assert enforce_sparsity(r, eps).values.tolist() == [2 * eps, eps, 0, 0, -eps * 1j]
    assert enforce_sparsity(FreqVector.zeros(3), eps).is_zero()
    once = enforce_sparsity(r, eps)
    assert enforce_sparsity(once, eps) == once


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(alpha=0.0),
        dict(epsilon=-1.0),
        dict(max_fp_iters=0),
        dict(p_max=0.0),
        dict(budget_gap=-1.0),
        dict(rho_star_db=float("nan")),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ConfigurationError):
        SparseFpConfig(**kwargs)


def test_default_budget():
    alloc, d = _instance(0)
    cfg = SparseFpConfig()
    assert cfg.rho_star_linear == pytest.approx(10 ** 0.6)
    assert cfg.budget(d, alloc) == pytest.approx(6 / 26 * d.energy)
    assert SparseFpConfig(budget_gap=10.0).budget(d, alloc) == pytest.approx(6 * 10.0 / 26 * d.energy)
    assert SparseFpConfig(p_max=2.5).budget(d, alloc) == 2.5


def test_low_papr_data_frees_every_reserved_tone():
    alloc = ToneAllocation(16, [1, 3, 8, 12])
    d = np.zeros(16, dtype=complex)
    d[0] = 1.0
    result = reduce_sparse(FreqVector(d), alloc, SparseFpConfig())
    assert result.status is ReductionStatus.REFINED
    assert result.r_freq.is_zero()
    assert result.n_active == 0
    assert result.freed_prt.tolist() == [1, 3, 8, 12]
    assert result.achieved_papr.linear == pytest.approx(1.0)


def test_zero_data_falls_back():
    alloc = ToneAllocation(16, [1, 3])
    result = reduce_sparse(FreqVector.zeros(16), alloc, SparseFpConfig())
    assert result.status is ReductionStatus.FALLBACK_TO_INIT
    assert result.r_freq.is_zero()


def test_unreachable_target_returns_the_initializer():
    alloc, d = _instance(3)
    result = reduce_sparse(d, alloc, SparseFpConfig(rho_star_db=-1.0))
    assert result.status is ReductionStatus.FALLBACK_TO_INIT
    assert result.r_freq == result.init.r_freq
    assert result.achieved_papr is result.init.achieved_papr
    assert result.n_active == result.init.active_prt.size


def test_refined_invariants():
    cfg = SparseFpConfig(rho_star_db=6.0, budget_gap=10.0)
    refined = 0
    for seed in range(8):
        alloc, d = _instance(seed)
        result = reduce_sparse(d, alloc, cfg)
        assert np.all(result.r_freq.values[alloc.data_idx] == 0)
        for it in result.trace:
            assert np.all(it.r_freq.values[alloc.data_idx] == 0)
        assert sorted(result.active_prt.tolist() + result.freed_prt.tolist()) == alloc.prt_idx.tolist()
        if result.status is not ReductionStatus.REFINED:
            continue
        refined += 1
        _, x = compose(d, result.r_freq, alloc)
        assert papr(x).linear <= cfg.rho_star_linear * (1 + 1e-4)
        assert result.r_freq.energy <= result.p_max * (1 + 1e-6)
        active = np.abs(result.r_freq.values[result.active_prt])
        assert np.all(active >= cfg.epsilon)
        assert result.n_active <= alloc.n_prt
    assert refined > 0


def test_trace_carries_consistent_auxiliary_variables():
    cfg = SparseFpConfig(rho_star_db=6.0, alpha=1e-3, budget_gap=10.0)
    steps = 0
    for seed in range(10):
        alloc, d = _instance(seed)
        result = reduce_sparse(d, alloc, cfg)
        for it in result.trace:
            _, x = compose(d, it.r_freq, alloc)
            assert np.array_equal(it.gamma_sq, update_gamma(alloc.restrict(it.r_freq), 1e-3))
            assert np.array_equal(it.zeta, update_zeta(x))
            assert it.papr_surrogate == pytest.approx(alloc.n_total / it.papr.linear, rel=1e-8)
        if result.trace:
            assert result.iterations == len(result.trace) - 1
        steps += result.iterations
    assert steps > 0


def test_surrogate_count_never_increases_without_intermediate_thresholding():
    cfg = SparseFpConfig(rho_star_db=6.0, threshold_final_only=True, budget_gap=10.0)
    checked = 0
    for seed in range(10):
        alloc, d = _instance(seed)
        result = reduce_sparse(d, alloc, cfg)
        values = [it.surrogate_l0 for it in result.trace[1:]]
        for before, after in zip(values, values[1:]):
            assert after <= before + 1e-4
            checked += 1
    assert checked > 0


def _reducible_instance():
    """An instance whose initializer lowers the PAPR, and a target in between"""
    for seed in range(20):
        alloc, d = _instance(seed)
        init = reduce_sota(d, alloc, SparseFpConfig().sota)
        raw_db = papr(idft(d)).db
        if init.achieved_papr.db < raw_db - 0.2:
            return alloc, d, init, (init.achieved_papr.db + raw_db) / 2
    pytest.fail("no instance where the initializer lowers the PAPR")


def test_infeasible_later_step_returns_the_initializer(monkeypatch):
    alloc, d, init, target = _reducible_instance()
    cfg = SparseFpConfig(rho_star_db=target, p_max=10 * init.r_freq.energy, convergence_tol=1e-12)

    calls = []

    def first_step_only(problem, tol=None):
        calls.append(problem.name)
        if len(calls) == 1:
            return solve(problem, tol)
        return SolveOutcome(SolveStatus.INFEASIBLE, None, math.nan, math.inf)

    monkeypatch.setattr(sparse_fp, "solve", first_step_only)
    result = reduce_sparse(d, alloc, cfg, init=init)
    assert calls == ["fp-step", "fp-step"]
    assert result.status is ReductionStatus.FALLBACK_TO_INIT
    assert len(result.trace) == 2
    assert result.r_freq == init.r_freq
    assert result.achieved_papr is init.achieved_papr
    assert result.within_budget


def test_fallback_may_exceed_the_budget():
    alloc, d, init, target = _reducible_instance()
    result = reduce_sparse(d, alloc, SparseFpConfig(rho_star_db=target, p_max=1e-9), init=init)
    assert result.status is ReductionStatus.FALLBACK_TO_INIT
    assert result.r_freq == init.r_freq
    assert not result.within_budget


def test_given_initializer_is_used():
    alloc, d = _instance(5)
    cfg = SparseFpConfig()
    init = reduce_sota(d, alloc, cfg.sota)
    result = reduce_sparse(d, alloc, cfg, init=init)
    assert result.init is init


def test_record():
    alloc = ToneAllocation(16, [1, 3])
    d = np.zeros(16, dtype=complex)
    d[5] = 1.0
    record = reduce_sparse(FreqVector(d), alloc, SparseFpConfig()).to_record()
    assert record["status"] == "Refined"
    assert record["n_active"] == 0
    assert record["freed_prt"] == [1, 3]
    assert record["papr_db"] == pytest.approx(0.0, abs=1e-12)
