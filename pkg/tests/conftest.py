"""Shared fixtures and helpers for the qgallery test suite."""

from __future__ import annotations

import numpy as np
import pytest

from qgallery import get_particle


def rel_err(value: float, reference: float) -> float:
    """Relative error |value - reference| / |reference|."""
    return abs(value - reference) / abs(reference)


@pytest.fixture(scope="session")
def neutron():
    return get_particle("n")


@pytest.fixture(scope="session")
def hydrogen():
    return get_particle("H")


@pytest.fixture(scope="session")
def antihydrogen():
    return get_particle("Hbar")


@pytest.fixture(scope="session")
def muonium():
    return get_particle("Mu")


@pytest.fixture(scope="session")
def positronium_33():
    return get_particle("Ps33")


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260823)
