# Copyright (c) 2026 The toneres developers

import enum

import numpy as np

from toneres.errors import ConfigurationError
from toneres.ofdm import FreqVector, ToneAllocation


@enum.unique
class Constellation(enum.Enum):
    QPSK = "qpsk"
    QAM16 = "16qam"

    @classmethod
    def parse(cls, name: str) -> "Constellation":
        """Look up a constellation by its configuration name"""
        try:
            return cls(name.strip().lower())
        except ValueError:
            choices = ", ".join(c.value for c in cls)
            raise ConfigurationError(f"Unknown constellation {name!r}, expected one of: {choices}") from None

    @property
    def points(self) -> np.ndarray:
        """The symbol alphabet, scaled to unit average power"""
        if self is Constellation.QPSK:
            levels = np.array([-1.0, 1.0])
        else:
            levels = np.array([-3.0, -1.0, 1.0, 3.0])
        grid = (levels[:, None] + 1j * levels[None, :]).ravel()
        return grid / np.sqrt(np.mean(np.abs(grid) ** 2))


def gen_data_symbols(alloc: ToneAllocation, constellation: Constellation, rng: np.random.Generator) -> FreqVector:
    """I.i.d. constellation symbols on the data tones, zeros on the reserved tones"""
    points = constellation.points
    values = np.zeros(alloc.n_total, dtype=np.complex128)
    values[alloc.data_idx] = points[rng.integers(0, points.size, size=alloc.n_data)]
    return FreqVector(values)
