# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Shared fixtures of the test suite."""

import math

import numpy as np
import pytest

from lindquad.model import SystemSpec, TwoModeChannel, tilted_channel, thermal_spec
from lindquad.sampling import make_rng


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(1234)


@pytest.fixture
def single_mode() -> SystemSpec:
    """One mode at ω = 1.3 and γ = 0.7 coupled to a bath with n_T = 0.2."""

    return thermal_spec([[1.3]], [[0.7]], 0.2)


@pytest.fixture
def two_mode() -> SystemSpec:
    """Two coupled modes with a non normal L, coupled to a bath with n_T = 0.1."""

    omega = np.array([[1.0, 0.3 - 0.2j], [0.3 + 0.2j, -0.5]])
    gamma = np.array([[0.8, 0.1j], [-0.1j, 0.5]])
    return thermal_spec(omega, gamma, 0.1)


@pytest.fixture
def channel() -> TwoModeChannel:
    """The tilted two-mode channel with θ_Γ = π/4."""

    return tilted_channel(math.pi / 4)
