# Copyright (c) 2026 The toneres developers

import time


class Timespec:
    def __init__(self, nanoseconds: int) -> None:
        """A wrapper around a monotonic time stamp in nanoseconds"""
        self._ns = nanoseconds

    @classmethod
    def get_monotonic_time(cls) -> "Timespec":
        """Get the current monotonic time"""
        return Timespec(time.monotonic_ns())

    def millis_since(self, start: "Timespec") -> float:
        """Milliseconds elapsed between start and this time stamp"""
        return (self._ns - start._ns) * 1e-6
