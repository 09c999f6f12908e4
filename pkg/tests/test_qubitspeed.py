# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import dataclasses
import math

import numpy as np
import pytest

from lindquad.errors import DimensionError, SpecValidationError
from lindquad.fockspace import FockSpace, build_liouvillian, oracle_propagate
from lindquad.lowtemp import LowTempPropagator
from lindquad.matkernel import hs_norm
from lindquad.model import TILT_ANGLES, TwoModeChannel, assemble_two_mode, tilted_channel
from lindquad.qubitspeed import (
    decay_horizon,
    embed_sector,
    fidelity_qsl,
    first_order_state,
    initial_qubit,
    restrict_to_sector,
    speed_surface,
    sweep,
    total_speed,
    two_photon_sector,
    v0_operator,
    v0_speed,
    zero_temp_state,
)

TOL = 1e-10
SPEED_TOL = 1e-6


def test_qubit_density() -> None:
    fs = FockSpace(2, 3)
    qubit = initial_qubit(math.pi / 3, math.pi / 5)

    rho = qubit.density(fs)

    ket = np.zeros(fs.dim, dtype=np.complex128)
    ket[fs.index((1, 0))], ket[fs.index((0, 1))] = qubit.amplitudes
    np.testing.assert_allclose(rho, np.outer(ket, ket.conj()), rtol=0, atol=TOL)

    with pytest.raises(DimensionError):
        qubit.density(FockSpace(1, 3))


def test_sector_embedding() -> None:
    fs = FockSpace(2, 5)
    sector_fs, indices = two_photon_sector()
    operator = np.arange(36, dtype=np.complex128).reshape(6, 6)

    embedded = embed_sector(operator, fs)

    assert len(indices) == 6
    assert embedded[fs.index((1, 1)), fs.index((0, 2))] == operator[4, 2]
    np.testing.assert_allclose(restrict_to_sector(embed_sector(operator, sector_fs)), operator, rtol=0, atol=0)


def test_initial_state(channel: TwoModeChannel) -> None:
    qubit = initial_qubit(math.pi / 2)

    state = zero_temp_state(channel, qubit, 0.0)

    np.testing.assert_allclose(state.r, qubit.r0, rtol=0, atol=TOL)
    assert state.r_scalar == pytest.approx(0.0, abs=TOL)
    assert np.trace(state.rho) == pytest.approx(1.0)


def test_zero_temperature_state_is_normalized(channel: TwoModeChannel) -> None:
    state = zero_temp_state(channel, initial_qubit(1.0, 0.4), 2.0)

    assert np.trace(state.rho) == pytest.approx(1.0)
    assert 0 < state.r_scalar < 1


@pytest.mark.parametrize("theta_gamma", TILT_ANGLES)
def test_zero_temperature_speed_against_the_oracle(theta_gamma: float) -> None:
    fs = FockSpace(2, 4)
    qubit = initial_qubit(math.pi / 3, math.pi / 5)
    channel = tilted_channel(theta_gamma)
    lsup = build_liouvillian(fs, assemble_two_mode(channel))
    rho0 = qubit.density(fs)
    h = 1e-6

    for t in (0.1, 1.0):
        forward = oracle_propagate(fs, lsup, rho0, t + h)
        backward = oracle_propagate(fs, lsup, rho0, t - h)
        oracle = hs_norm(forward - backward) / (2 * h)

        assert v0_speed(channel, qubit, t) == pytest.approx(oracle, rel=SPEED_TOL)


def test_speed_is_the_norm_of_the_derivative(channel: TwoModeChannel) -> None:
    qubit = initial_qubit(0.7, 1.1)

    v0 = v0_operator(channel, qubit, 0.6)

    assert v0_speed(channel, qubit, 0.6) == pytest.approx(hs_norm(v0))
    assert total_speed(channel, qubit, 0.0, 0.6) == pytest.approx(hs_norm(v0))
    assert abs(np.trace(v0)) < TOL


@pytest.mark.parametrize("theta_gamma", TILT_ANGLES)
def test_first_order_state_against_the_generic_correction(theta_gamma: float) -> None:
    fs = FockSpace(2, 5)
    qubit = initial_qubit(math.pi / 3, math.pi / 5)
    channel = tilted_channel(theta_gamma)

    rho1 = LowTempPropagator(fs, assemble_two_mode(channel, 0.1)).propagate(qubit.density(fs), 0.8).rho1_t
    closed_form = embed_sector(first_order_state(channel, qubit, 0.8).rho1, fs)

    np.testing.assert_allclose(closed_form, rho1, rtol=0, atol=TOL)


def test_first_order_state_derivative(channel: TwoModeChannel) -> None:
    qubit = initial_qubit(1.2, 0.3)
    h = 1e-6

    forward = first_order_state(channel, qubit, 0.5 + h).rho1
    backward = first_order_state(channel, qubit, 0.5 - h).rho1

    np.testing.assert_allclose(
        first_order_state(channel, qubit, 0.5).v1_operator, (forward - backward) / (2 * h), rtol=0, atol=1e-8
    )


def test_initial_speed_grows_with_the_temperature(channel: TwoModeChannel) -> None:
    qubit = initial_qubit(math.pi / 3, math.pi / 5)

    speeds = [total_speed(channel, qubit, n_T, 0.0) for n_T in (0.0, 0.1, 0.3)]

    assert speeds[0] < speeds[1] < speeds[2]


@pytest.mark.parametrize("theta_gamma", TILT_ANGLES)
def test_speed_decays(theta_gamma: float) -> None:
    channel = tilted_channel(theta_gamma)
    qubit = initial_qubit(math.pi / 3, math.pi / 5)
    horizon = decay_horizon(channel)

    assert horizon >= 10 / channel.gamma0
    assert total_speed(channel, qubit, 0.1, horizon) < 1e-3 * total_speed(channel, qubit, 0.1, 0.0)


@pytest.mark.parametrize("n_T", [0.0, 0.1, 0.3])
def test_fidelity_and_speed_limit(channel: TwoModeChannel, n_T: float) -> None:
    times = np.linspace(0.0, 10.0, 201)

    trace = fidelity_qsl(channel, initial_qubit(math.pi / 3, math.pi / 5), n_T, times)

    assert trace.fidelity[0] == pytest.approx(1.0)
    assert trace.t_f[0] == 0.0
    if n_T == 0:
        np.testing.assert_allclose(trace.v, trace.v0, rtol=0, atol=0)
    assert np.all(np.abs(trace.fidelity_rate) <= trace.v + 1e-12)
    assert np.all(trace.t_f <= trace.times + 1e-12)


def test_fidelity_rate(channel: TwoModeChannel) -> None:
    times = np.linspace(0.0, 2.0, 2001)
    step = times[1] - times[0]

    trace = fidelity_qsl(channel, initial_qubit(0.9, 2.0), 0.1, times)

    # Richardson extrapolation of central differences with steps h and 2h
    fidelity = trace.fidelity
    narrow = (fidelity[3:-1] - fidelity[1:-3]) / (2 * step)
    wide = (fidelity[4:] - fidelity[:-4]) / (4 * step)
    np.testing.assert_allclose((4 * narrow - wide) / 3, trace.fidelity_rate[2:-2], rtol=0, atol=1e-7)


def test_speed_does_not_depend_on_the_common_frequency(channel: TwoModeChannel) -> None:
    times = np.linspace(0.0, 5.0, 51)
    qubit = initial_qubit(math.pi / 3, math.pi / 5)
    shifted = dataclasses.replace(channel, omega0=channel.omega0 + 0.7)

    trace = fidelity_qsl(channel, qubit, 0.1, times)
    other = fidelity_qsl(shifted, qubit, 0.1, times)

    np.testing.assert_allclose(other.v, trace.v, rtol=0, atol=1e-12)
    np.testing.assert_allclose(other.fidelity, trace.fidelity, rtol=0, atol=1e-12)


@pytest.mark.parametrize("grid", [[], [0.5, 1.0], [0.0, 1.0, 1.0]])
def test_bad_time_grids(channel: TwoModeChannel, grid: list[float]) -> None:
    with pytest.raises(DimensionError):
        fidelity_qsl(channel, initial_qubit(0.0), 0.1, grid)


def test_sweep_order() -> None:
    channels = [tilted_channel(theta) for theta in TILT_ANGLES]
    n_T_list = [0.0, 0.1]

    traces = sweep(channels, initial_qubit(math.pi / 2), n_T_list, [0.0, 0.5, 1.0])

    assert [(trace.channel, trace.n_T) for trace in traces] == [(c, n_T) for c in channels for n_T in n_T_list]


def test_sweep_rejects_unstable_channels() -> None:
    unstable = TwoModeChannel(omega0=0.0, omega_vec=(0.0, 0.0, 0.0), gamma0=0.5, gamma_vec=(0.9, 0.0, 0.0))

    with pytest.raises(SpecValidationError):
        sweep([unstable], initial_qubit(0.0), [0.0], [0.0, 1.0])


def test_speed_surface(channel: TwoModeChannel) -> None:
    thetas = [0.0, math.pi / 2, math.pi]
    times = [0.0, 0.5, 1.0, 1.5]

    surface = speed_surface(channel, 0.1, thetas, times)

    assert len(surface) == 12
    assert [point.theta for point in surface[:4]] == [0.0] * 4
    assert [point.t for point in surface[:4]] == times
    assert surface[5].v == pytest.approx(total_speed(channel, initial_qubit(math.pi / 2), 0.1, 0.5))
