from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from nodecheck import build_state_space, builtin_registry, parse_graph_file
from nodecheck.specs import FlagReset

from randgen import extended_registry
from systems import sw_system

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")
GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def golden_path(name: str) -> str:
    return os.path.join(GOLDEN, name)


@pytest.fixture(scope="session")
def registry():
    return builtin_registry()


@pytest.fixture(scope="session")
def ext_registry():
    return extended_registry()


@pytest.fixture(scope="session")
def movie_graph():
    return parse_graph_file(fixture_path("movie_skip.json"))


@pytest.fixture(scope="session")
def movie_fixed_graph():
    return parse_graph_file(fixture_path("movie_skip_fixed.json"))


@pytest.fixture(scope="session")
def movie_nose_graph():
    return parse_graph_file(fixture_path("movie_skip_nose.json"))


@pytest.fixture(scope="session")
def flag_reset():
    return FlagReset("EventMode", "true", "false")


@pytest.fixture(scope="session")
def jit_warm():
    """Compile the numeric kernels once so timing assertions measure the
    algorithms, not the first-call JIT."""
    ks = build_state_space(sw_system())
    from nodecheck.checker import check

    check(ks, sw_system().specs[0])
    return True
