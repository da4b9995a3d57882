"""Test configuration and fixtures for qsc_ldpc."""

import os

import numpy as np
import pytest

from qsc_ldpc.config import reset_settings
from qsc_ldpc.models.channel import ChannelParams
from tests.utils.factories import small_code, tree_code


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test sees default settings, unaffected by the caller's environment."""
    for name in list(os.environ):
        if name.startswith("QSC_LDPC_"):
            monkeypatch.delenv(name)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def rng():
    """Seeded generator."""
    return np.random.default_rng(20240611)


@pytest.fixture
def qsc_params():
    """m=4, epsilon=0.25, the operating point used throughout."""
    return ChannelParams(m=4, epsilon=0.25)


@pytest.fixture
def toy_tree():
    """Cycle-free N=8, m=2 code."""
    return tree_code()


@pytest.fixture
def toy_code():
    """N=12, M=6 code with one 4-cycle."""
    return small_code()


@pytest.fixture
def temp_dir(tmp_path):
    """Temporary directory for file outputs."""
    return tmp_path
