# Copyright (c) 2026 The toneres developers

from setuptools import setup


setup()
