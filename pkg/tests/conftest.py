"""Shared fixtures and builders for the test suite."""
from __future__ import annotations

import numpy as np
import pytest

from pcmxbar import CrossbarArray, DeviceParams, ProtocolParams


def make_rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


def uniform_array(n: int, resistance: float, params: DeviceParams) -> CrossbarArray:
    """Build an array with every cell at the same resistance, zero pulse history."""
    return CrossbarArray(
        n,
        np.full((n, n), resistance, dtype=np.float64),
        np.zeros((n, n), dtype=np.int64),
        params,
    )


@pytest.fixture
def quiet_device() -> DeviceParams:
    """Device with cycle-to-cycle noise switched off; everything else default."""
    return DeviceParams(sigma_c2c=0.0)


@pytest.fixture
def noisy_device() -> DeviceParams:
    return DeviceParams()


@pytest.fixture
def protocol() -> ProtocolParams:
    return ProtocolParams()


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(0)
