"""
@brief Shared pytest setup: repository root on sys.path, file logging off,
       the `slow` marker for the exhaustive grids.
"""

import os
import sys

os.environ.setdefault("FAIRDIV_LOG_DIR", "-")
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from fractions import Fraction  # noqa: E402

import pytest  # noqa: E402

from fairdiv.model import Allocation, ValuationProfile  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive grids, deselect with -m 'not slow'")


def F(num, den=1) -> Fraction:
    return Fraction(num, den)


@pytest.fixture
def uniform2x4() -> ValuationProfile:
    return ValuationProfile(((F(1, 4),) * 4, (F(1, 4),) * 4))


@pytest.fixture
def split22() -> Allocation:
    return Allocation(((0, 1), (2, 3)))
