# Copyright (c) 2026 The toneres developers

import csv
from pathlib import Path
from typing import Optional, Type, TypeVar, Union

import numpy as np
import scipy.fft

from toneres.errors import ConfigurationError

_V = TypeVar("_V", bound="_ComplexVector")

CSV_HEADER = ("index", "re", "im")


class _ComplexVector:
    def __init__(self, values) -> None:
        """An immutable, finite, complex vector of length N ≥ 2

        :param values:
            Anything numpy can turn into a one-dimensional complex array.  The
            data is copied, so later changes to the argument are not seen.
        """
        array = np.array(values, dtype=np.complex128)
        if array.ndim != 1:
            raise ConfigurationError(f"Expected a one-dimensional vector, got shape {array.shape}")
        if array.size < 2:
            raise ConfigurationError(f"Vector length must be at least 2, got {array.size}")
        if not np.all(np.isfinite(array)):
            raise ConfigurationError("Vector entries must all be finite")
        array.flags.writeable = False
        self._values = array

    @classmethod
    def zeros(cls: Type[_V], n: int) -> _V:
        """The all-zero vector of length n"""
        return cls(np.zeros(n, dtype=np.complex128))

    @property
    def values(self) -> np.ndarray:
        """Read-only view of the entries"""
        return self._values

    @property
    def n(self) -> int:
        """Vector length N"""
        return self._values.size

    @property
    def energy(self) -> float:
        """Squared Euclidean norm"""
        return float(np.vdot(self._values, self._values).real)

    def is_zero(self) -> bool:
        """True when every entry is exactly zero"""
        return not np.any(self._values)

    def require_length(self, n: int) -> None:
        """Raise a configuration error unless the vector has length n"""
        if self.n != n:
            raise ConfigurationError(f"{type(self).__name__} has length {self.n}, expected {n}")

    def to_csv(self, path: Union[str, Path]) -> None:
        """Write the vector as rows of (index, re, im)"""
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(CSV_HEADER)
            for index, value in enumerate(self._values):
                writer.writerow((index, repr(float(value.real)), repr(float(value.imag))))

    @classmethod
    def from_csv(cls: Type[_V], path: Union[str, Path]) -> _V:
        """Read a vector written by `to_csv`

        Rows may come in any order, but every index in 0..N-1 must be present
        exactly once.
        """
        try:
            with open(path, newline="") as f:
                rows = list(csv.DictReader(f))
        except OSError as e:
            raise ConfigurationError(f"Unable to read vector file {path}: {e}") from e

        try:
            entries = {int(row["index"]): complex(float(row["re"]), float(row["im"])) for row in rows}
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigurationError(f"Malformed vector file {path}: {e}") from e
        if len(entries) != len(rows) or sorted(entries) != list(range(len(rows))):
            raise ConfigurationError(f"Vector file {path} must list each index 0..N-1 exactly once")

        return cls([entries[i] for i in range(len(rows))])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return bool(np.array_equal(self._values, other._values))

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._values.tobytes()))

    def __str__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, energy={self.energy:.6g})"


class FreqVector(_ComplexVector):
    """Complex symbol amplitudes, one per subcarrier"""


class TimeSignal(_ComplexVector):
    """Complex baseband samples at the Nyquist rate, one per time index"""


def idft(v: FreqVector, n: Optional[int] = None) -> TimeSignal:
    """The unitary inverse DFT, x = F_N^H v

    :param v:
        Frequency-domain symbols.
    :param n:
        Expected length; a mismatch is a configuration error.
    """
    if n is not None:
        v.require_length(n)
    return TimeSignal(scipy.fft.ifft(v.values, norm="ortho"))


def dft(x: TimeSignal, n: Optional[int] = None) -> FreqVector:
    """The unitary forward DFT, v = F_N x

    :param x:
        Time-domain samples.
    :param n:
        Expected length; a mismatch is a configuration error.
    """
    if n is not None:
        x.require_length(n)
    return FreqVector(scipy.fft.fft(x.values, norm="ortho"))


def idft_matrix_columns(n: int, columns: np.ndarray) -> np.ndarray:
    """The columns of F_N^H selected by the given subcarrier indices

    Column j is the time-domain waveform of a unit symbol on subcarrier
    columns[j], so that idft(v) == idft_matrix_columns(n, idx) @ v[idx]
    whenever v is supported on idx.
    """
    k = np.arange(n)[:, None]
    return np.exp(2j * np.pi * k * np.asarray(columns)[None, :] / n) / np.sqrt(n)
