# Copyright (c) 2026 The toneres developers

from typing import Tuple

import numpy as np

from toneres.errors import SupportViolationError
from .allocation import ToneAllocation
from .vectors import FreqVector, TimeSignal, idft

SUPPORT_TOL = 1e-12


def check_data_support(d: FreqVector, alloc: ToneAllocation) -> None:
    """Raise unless d vanishes on the reserved tones"""
    d.require_length(alloc.n_total)
    leak = np.abs(d.values[alloc.prt_mask])
    if leak.size and leak.max() > SUPPORT_TOL:
        raise SupportViolationError(f"Data vector is nonzero on reserved tone {alloc.prt_idx[leak.argmax()]}")


def check_prt_support(r: FreqVector, alloc: ToneAllocation) -> None:
    """Raise unless r vanishes on the data tones"""
    r.require_length(alloc.n_total)
    leak = np.abs(r.values[~alloc.prt_mask])
    if leak.size and leak.max() > SUPPORT_TOL:
        raise SupportViolationError(f"Reserved tone vector is nonzero on data tone {alloc.data_idx[leak.argmax()]}")


def compose(d: FreqVector, r: FreqVector, alloc: ToneAllocation) -> Tuple[FreqVector, TimeSignal]:
    """Combine data and reserved tone symbols into the transmitted symbol

    Returns the frequency-domain sum d + r and its time-domain waveform
    F_N^H (d + r).
    """
    check_data_support(d, alloc)
    check_prt_support(r, alloc)

    x_freq = FreqVector(d.values + r.values)
    return x_freq, idft(x_freq)
