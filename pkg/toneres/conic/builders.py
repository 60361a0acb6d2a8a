# Copyright (c) 2026 The toneres developers

import math
from typing import Optional, Tuple

import numpy as np

from toneres.errors import ConfigurationError
from toneres.ofdm import TimeSignal, ToneAllocation
from toneres.ofdm.vectors import idft_matrix_columns
from .problem import EpigraphProblem, QuadraticConstraint, SocConstraint, VariableLayout


def _embedding(alloc: ToneAllocation, layout: VariableLayout) -> Tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts of the map z ↦ F_N^H r, each of shape (N, dim)"""
    basis = idft_matrix_columns(alloc.n_total, alloc.prt_idx)
    a_re = np.zeros((alloc.n_total, layout.dim))
    a_im = np.zeros((alloc.n_total, layout.dim))
    a_re[:, layout.re] = basis.real
    a_re[:, layout.im] = -basis.imag
    a_im[:, layout.re] = basis.imag
    a_im[:, layout.im] = basis.real
    return a_re, a_im


def _peak_cones(d_time: TimeSignal, layout: VariableLayout, a_re: np.ndarray, a_im: np.ndarray) -> SocConstraint:
    """|d_k + (F_N^H r)_k| ≤ t for every time index k"""
    n = d_time.n
    c = np.zeros((n, layout.dim))
    c[:, layout.peak] = 1.0
    return SocConstraint(
        label="peak",
        a=np.stack([a_re, a_im], axis=1),
        b=np.stack([d_time.values.real, d_time.values.imag], axis=1),
        c=c,
        d=np.zeros(n),
    )


def _check_dimensions(d_time: TimeSignal, alloc: ToneAllocation) -> VariableLayout:
    d_time.require_length(alloc.n_total)
    if alloc.n_prt < 1:
        raise ConfigurationError("At least one reserved tone is required")
    return VariableLayout(alloc.n_prt)


def tone_power_cap(data_energy: float, n_total: int, n_prt: int, omega: float) -> float:
    """Per-tone amplitude bound sqrt(Ω/(N−N_R)·‖d̃‖₂²)"""
    return math.sqrt(omega / (n_total - n_prt) * data_energy)


def build_minimax_peak(
    d_time: TimeSignal,
    alloc: ToneAllocation,
    omega: float,
    data_energy: Optional[float] = None,
) -> EpigraphProblem:
    """The peak-power minimization over reserved tones with a per-tone cap

    minimize t subject to |(d + F_N^H r)_k| ≤ t for all k and
    |r_n| ≤ sqrt(Ω/(N−N_R))·‖d̃‖₂ for all n ∈ ℛ.  Minimizing t is the same
    as minimizing the peak power t², which is the value a solve reports.

    :param d_time:
        Time-domain data signal.
    :param alloc:
        The tone allocation; the variables are the reserved tones.
    :param omega:
        Power level gap constant Ω (linear, > 0).
    :param data_energy:
        ‖d̃‖₂² measured in the frequency domain.  Defaults to the time-domain
        energy, which is the same under the unitary transform.
    """
    if not omega > 0:
        raise ConfigurationError(f"Power level gap constant must be positive, got {omega}")
    layout = _check_dimensions(d_time, alloc)
    if data_energy is None:
        data_energy = d_time.energy

    a_re, a_im = _embedding(alloc, layout)
    cap = tone_power_cap(data_energy, alloc.n_total, alloc.n_prt, omega)

    selector = np.zeros((alloc.n_prt, 2, layout.dim))
    rows = np.arange(alloc.n_prt)
    selector[rows, 0, rows] = 1.0
    selector[rows, 1, alloc.n_prt + rows] = 1.0
    tone_cones = SocConstraint(
        label="tone-cap",
        a=selector,
        b=np.zeros((alloc.n_prt, 2)),
        c=np.zeros((alloc.n_prt, layout.dim)),
        d=np.full(alloc.n_prt, cap),
    )

    linear = np.zeros(layout.dim)
    linear[layout.peak] = 1.0
    return EpigraphProblem(
        layout=layout,
        objective_diag=np.zeros(layout.dim),
        objective_linear=linear,
        cones=(_peak_cones(d_time, layout, a_re, a_im), tone_cones),
        name="minimax-peak",
        report_squared=True,
    )


def papr_surrogate(zeta: np.ndarray, x: np.ndarray, peak: Optional[float] = None) -> float:
    """2·Re⟨ζ, x⟩ − ‖ζ‖₂²·t² with t = ‖x‖∞ unless given

    With ζ = x/‖x‖∞² this equals ‖x‖₂²/‖x‖∞² = N/ρ(x); for any other ζ it is
    a lower bound of that ratio.
    """
    if peak is None:
        peak = float(np.max(np.abs(x)))
    return float(2.0 * np.vdot(zeta, x).real - np.vdot(zeta, zeta).real * peak ** 2)


def build_fp_step(
    d_time: TimeSignal,
    alloc: ToneAllocation,
    gamma_sq: np.ndarray,
    zeta: np.ndarray,
    p_max: float,
    rho_star_linear: float,
) -> EpigraphProblem:
    """One convexified step of the reserved tone sparsification

    minimize Σ_{n∈ℛ} γ_n²|r_n|² subject to ‖r‖₂² ≤ P_max,
    |x_k| ≤ t for all k, and 2·Re⟨ζ, x⟩ − ‖ζ‖₂²·t² ≥ N/ρ*,
    where x = d + F_N^H r and ⟨·,·⟩ conjugates its first argument.

    The surrogate constraint decreases in t, so at the optimum it holds with
    t = ‖x‖∞.
    """
    layout = _check_dimensions(d_time, alloc)
    gamma_sq = np.asarray(gamma_sq, dtype=float)
    zeta = np.asarray(zeta, dtype=np.complex128)
    if gamma_sq.shape != (alloc.n_prt,):
        raise ConfigurationError(f"Expected {alloc.n_prt} weights, got shape {gamma_sq.shape}")
    if zeta.shape != (alloc.n_total,):
        raise ConfigurationError(f"Expected an auxiliary vector of length {alloc.n_total}, got shape {zeta.shape}")
    if np.any(gamma_sq < 0) or not np.all(np.isfinite(gamma_sq)):
        raise ConfigurationError("Weights must be finite and nonnegative")
    if not np.all(np.isfinite(zeta)):
        raise ConfigurationError("Auxiliary vector must be finite")
    if not p_max > 0:
        raise ConfigurationError(f"Power budget must be positive, got {p_max}")
    if not rho_star_linear > 0:
        raise ConfigurationError(f"Target PAPR must be positive, got {rho_star_linear}")

    a_re, a_im = _embedding(alloc, layout)
    d = d_time.values

    diag = np.zeros(layout.dim)
    diag[layout.re] = gamma_sq
    diag[layout.im] = gamma_sq

    power_q = np.zeros(layout.dim)
    power_q[layout.re] = 1.0
    power_q[layout.im] = 1.0
    power = QuadraticConstraint(label="power", q=power_q, a=np.zeros(layout.dim), c=-float(p_max))

    surrogate_q = np.zeros(layout.dim)
    surrogate_q[layout.peak] = float(np.vdot(zeta, zeta).real)
    surrogate = QuadraticConstraint(
        label="papr-surrogate",
        q=surrogate_q,
        a=-2.0 * (zeta.real @ a_re + zeta.imag @ a_im),
        c=alloc.n_total / rho_star_linear - 2.0 * float(zeta.real @ d.real + zeta.imag @ d.imag),
    )

    return EpigraphProblem(
        layout=layout,
        objective_diag=diag,
        objective_linear=np.zeros(layout.dim),
        cones=(_peak_cones(d_time, layout, a_re, a_im),),
        quadratics=(power, surrogate),
        name="fp-step",
    )
