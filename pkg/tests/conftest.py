"""Shared fixtures for the test suite."""

import pytest

from sqgkit.spectral import GridSpec


@pytest.fixture
def grid64():
    return GridSpec(64, 64)


@pytest.fixture
def grid32():
    return GridSpec(32, 32)
