# Copyright (c) 2026 The toneres developers

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft

from toneres.errors import ConfigurationError, UndefinedPaprError
from .vectors import FreqVector, TimeSignal


def db_to_linear(db: float) -> float:
    """Convert a power ratio from dB"""
    return 10.0 ** (db / 10.0)


def linear_to_db(linear: float) -> float:
    """Convert a power ratio to dB"""
    return 10.0 * math.log10(linear)


@dataclass(frozen=True)
class PaprValue:
    """A peak-to-average power ratio, stored linearly"""

    linear: float

    @classmethod
    def from_db(cls, db: float) -> "PaprValue":
        return cls(db_to_linear(db))

    @property
    def db(self) -> float:
        """The ratio in dB"""
        return linear_to_db(self.linear)

    def __str__(self) -> str:
        return f"{self.db:.4f} dB"


def papr(x: TimeSignal) -> PaprValue:
    """Peak power over mean power of the N samples

    ‖x‖∞² / ((1/N)‖x‖₂²), which always lies in [1, N].
    """
    power = np.abs(x.values) ** 2
    mean_power = float(np.mean(power))
    if mean_power == 0.0:
        raise UndefinedPaprError("PAPR of an all-zero signal is undefined")
    return PaprValue(float(np.max(power)) / mean_power)


def papr_oversampled(v: FreqVector, factor: int) -> PaprValue:
    """PAPR of the L-times oversampled signal of a frequency vector

    The spectrum is zero-padded in the middle (bins 0..N/2-1 stay at the
    start, the upper half moves to the end) before a length L·N IDFT, so that
    the interpolated waveform passes through the Nyquist-rate samples.
    Factor 1 is `papr(idft(v))`.
    """
    if factor < 1:
        raise ConfigurationError(f"Oversampling factor must be at least 1, got {factor}")
    n = v.n
    if factor == 1:
        return papr(TimeSignal(scipy.fft.ifft(v.values, norm="ortho")))

    half = (n + 1) // 2
    padded = np.zeros(factor * n, dtype=np.complex128)
    padded[:half] = v.values[:half]
    padded[factor * n - (n - half):] = v.values[half:]
    return papr(TimeSignal(scipy.fft.ifft(padded, norm="ortho")))
