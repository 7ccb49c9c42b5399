"""Shared fixtures: one arithmetic context per p, built once per run."""

import pytest

from heckeforms import build_field

_FIELDS = {}


def field(p):
    """Cached context; building one runs sympy + interval seeding."""
    ctx = _FIELDS.get(p)
    if ctx is None:
        ctx = _FIELDS[p] = build_field(p)
    return ctx


@pytest.fixture(scope="session")
def ctx3():
    return field(3)


@pytest.fixture(scope="session")
def ctx4():
    return field(4)


@pytest.fixture(scope="session")
def ctx5():
    return field(5)


@pytest.fixture(scope="session")
def ctx6():
    return field(6)


@pytest.fixture(scope="session")
def ctx7():
    return field(7)
