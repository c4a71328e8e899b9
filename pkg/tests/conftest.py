"""Shared quivers for the test suite."""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from kac_cover.quiver import Quiver
from kac_cover.quiver_file import kronecker, loops, path, star


@pytest.fixture
def a2() -> Quiver:
    return path(2)


@pytest.fixture
def k2() -> Quiver:
    return kronecker(2)


@pytest.fixture
def k3() -> Quiver:
    return kronecker(3)


@pytest.fixture
def k4() -> Quiver:
    return kronecker(4)


@pytest.fixture
def jordan() -> Quiver:
    return loops(1)


@pytest.fixture
def dtilde4() -> Quiver:
    """Four leaves pointing into a centre, centre declared first."""
    return star(4)
