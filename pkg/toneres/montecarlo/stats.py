# Copyright (c) 2026 The toneres developers

from typing import List, Sequence, Tuple

import numpy as np

from toneres.errors import ConfigurationError


def ecdf(values: Sequence[float]) -> List[Tuple[float, float]]:
    """Empirical CDF as (value, P[X ≤ value]) at each distinct value, ascending"""
    if len(values) == 0:
        raise ConfigurationError("Empirical CDF of an empty sample is undefined")
    distinct, counts = np.unique(np.asarray(values, dtype=float), return_counts=True)
    cumulative = np.cumsum(counts) / counts.sum()
    return [(float(v), float(p)) for v, p in zip(distinct, cumulative)]


def pmf(counts: Sequence[int]) -> List[Tuple[int, float]]:
    """Normalized histogram as (count, probability), ascending"""
    if len(counts) == 0:
        raise ConfigurationError("Probability mass function of an empty sample is undefined")
    distinct, freq = np.unique(np.asarray(counts, dtype=int), return_counts=True)
    total = freq.sum()
    return [(int(v), float(f / total)) for v, f in zip(distinct, freq)]


def mode(counts: Sequence[int]) -> int:
    """Most frequent value, the smallest one on ties"""
    return max(pmf(counts), key=lambda item: (item[1], -item[0]))[0]
