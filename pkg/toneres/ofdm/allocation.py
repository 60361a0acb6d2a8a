# Copyright (c) 2026 The toneres developers

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from toneres.errors import ConfigurationError
from .vectors import FreqVector


@enum.unique
class AllocationKind(enum.Enum):
    RANDOM = "random"
    FIXED = "fixed"


@dataclass(frozen=True)
class AllocationStrategy:
    """How the reserved tones are placed among the N subcarriers"""

    kind: AllocationKind = AllocationKind.RANDOM
    seed: Optional[int] = None
    indices: Tuple[int, ...] = ()

    @classmethod
    def random(cls, seed: Optional[int] = None) -> "AllocationStrategy":
        """Uniformly drawn reserved tones, reproducible given the seed"""
        return cls(AllocationKind.RANDOM, seed=seed)

    @classmethod
    def fixed(cls, indices: Iterable[int]) -> "AllocationStrategy":
        """An explicit list of zero-based reserved tones"""
        return cls(AllocationKind.FIXED, indices=tuple(int(i) for i in indices))


class ToneAllocation:
    def __init__(self, n_total: int, prt_idx: Sequence[int]) -> None:
        """A partition of the subcarriers into data and reserved tones

        :param n_total:
            Number of subcarriers N.
        :param prt_idx:
            Zero-based indices of the peak-reduction tones.  Every remaining
            subcarrier carries data.
        """
        if n_total < 2:
            raise ConfigurationError(f"Need at least 2 subcarriers, got {n_total}")

        prt = np.array(sorted(int(i) for i in prt_idx), dtype=np.intp)
        if prt.size < 1 or prt.size >= n_total:
            raise ConfigurationError(f"Number of reserved tones must be in [1, {n_total - 1}], got {prt.size}")
        if prt[0] < 0 or prt[-1] >= n_total:
            raise ConfigurationError(f"Reserved tone indices must lie in [0, {n_total - 1}]")
        if np.unique(prt).size != prt.size:
            raise ConfigurationError("Reserved tone indices must be distinct")

        mask = np.zeros(n_total, dtype=bool)
        mask[prt] = True
        data = np.flatnonzero(~mask)

        prt.flags.writeable = False
        data.flags.writeable = False
        mask.flags.writeable = False
        self._n_total = n_total
        self._prt = prt
        self._data = data
        self._prt_mask = mask

    @property
    def n_total(self) -> int:
        """Number of subcarriers N"""
        return self._n_total

    @property
    def prt_idx(self) -> np.ndarray:
        """Ordered reserved (peak-reduction) tone indices ℛ"""
        return self._prt

    @property
    def data_idx(self) -> np.ndarray:
        """Ordered data tone indices 𝒟"""
        return self._data

    @property
    def prt_mask(self) -> np.ndarray:
        """Boolean mask over the N subcarriers, True on ℛ"""
        return self._prt_mask

    @property
    def n_prt(self) -> int:
        """N_R"""
        return self._prt.size

    @property
    def n_data(self) -> int:
        """N − N_R"""
        return self._data.size

    def restrict(self, v: FreqVector) -> np.ndarray:
        """The entries of v on the reserved tones, in ℛ order"""
        v.require_length(self._n_total)
        return v.values[self._prt].copy()

    def embed(self, prt_values) -> FreqVector:
        """A full-length vector carrying prt_values on ℛ and zeros on 𝒟"""
        prt_values = np.asarray(prt_values, dtype=np.complex128)
        if prt_values.shape != (self.n_prt,):
            raise ConfigurationError(f"Expected {self.n_prt} reserved tone values, got shape {prt_values.shape}")
        full = np.zeros(self._n_total, dtype=np.complex128)
        full[self._prt] = prt_values
        return FreqVector(full)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ToneAllocation):
            return NotImplemented
        return self._n_total == other._n_total and bool(np.array_equal(self._prt, other._prt))

    def __hash__(self) -> int:
        return hash((self._n_total, self._prt.tobytes()))

    def __str__(self) -> str:
        return f"ToneAllocation(N={self._n_total}, prt={self._prt.tolist()})"


def make_allocation(
    n_total: int,
    n_prt: int,
    strategy: AllocationStrategy,
    rng: Optional[np.random.Generator] = None,
) -> ToneAllocation:
    """Build a tone allocation

    :param n_total:
        Number of subcarriers N.
    :param n_prt:
        Number of reserved tones, 1 ≤ n_prt < n_total.
    :param strategy:
        Random placement or a fixed index list.  A fixed list must have
        exactly n_prt distinct in-range entries.
    :param rng:
        Generator used by the random strategy instead of one seeded from
        `strategy.seed`; campaigns pass their per-trial stream here.
    """
    if not 1 <= n_prt < n_total:
        raise ConfigurationError(f"Number of reserved tones must be in [1, {n_total - 1}], got {n_prt}")

    if strategy.kind is AllocationKind.FIXED:
        if len(strategy.indices) != n_prt:
            raise ConfigurationError(
                f"Fixed allocation lists {len(strategy.indices)} tones but {n_prt} are reserved"
            )
        return ToneAllocation(n_total, strategy.indices)

    if rng is None:
        rng = np.random.default_rng(strategy.seed)
    return ToneAllocation(n_total, rng.choice(n_total, size=n_prt, replace=False))
