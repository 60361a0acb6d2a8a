# Copyright (c) 2026 The toneres developers

from .allocation import AllocationKind, AllocationStrategy, ToneAllocation, make_allocation  # noqa: F401
from .compose import check_data_support, check_prt_support, compose  # noqa: F401
from .papr import PaprValue, db_to_linear, linear_to_db, papr, papr_oversampled  # noqa: F401
from .vectors import FreqVector, TimeSignal, dft, idft  # noqa: F401
