"""Shared fixtures: small trees and matrices with hand-checkable values."""

import sys
from fractions import Fraction
from itertools import combinations

import pytest

from treedissim import DistanceMatrix, distance_matrix, parse_newick


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one line per acceptance criterion after the run."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

QUARTET_NEWICK = "((1:1,2:1):1,3:1,4:1);"


@pytest.fixture
def quartet():
    """Unit-weight quartet with cherry {1,2}: pairwise distances 2 or 3."""
    return parse_newick(QUARTET_NEWICK)


@pytest.fixture
def quartet_dm(quartet):
    return distance_matrix(quartet)


@pytest.fixture
def ones5():
    """All-ones matrix on five points: a tree metric (star with 1/2 legs)."""
    entries = {p: Fraction(1) for p in combinations(range(1, 6), 2)}
    return DistanceMatrix(5, entries)


@pytest.fixture
def bumped5(ones5):
    """All-ones with D(4,5) = 2: violates four-point at {1,2,4,5}."""
    entries = dict(ones5.entries)
    entries[(4, 5)] = Fraction(2)
    return DistanceMatrix(5, entries)
