# Copyright (c) 2026 The toneres developers

__version__ = "0.1.0"
