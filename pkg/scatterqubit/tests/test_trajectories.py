import math

import numpy as np
import pytest
from pydantic import ValidationError

from scatterqubit.dynamics.density import DensityMatrix, InvalidStateError
from scatterqubit.dynamics.propagators import StepSizeError
from scatterqubit.dynamics.sequences import PulseSequence, Wait, simulate_sequence
from scatterqubit.dynamics.trajectories import (
    TrajectoryConfig,
    resolve_step,
    run_trajectories,
    trajectory_amplitudes,
)
from scatterqubit.scattering.rates import RateSet
from scatterqubit.utils.constants import Qubit
from scatterqubit.utils.exceptions import ConfigError

RATES = RateSet.from_channels(gamma_du=30.0, gamma_ud=50.0, gamma_uu=20.0, gamma_dd=10.0, gamma_el=80.0)
UP = DensityMatrix.basis(Qubit.U)


@pytest.mark.parametrize(
    "seq",
    [
        PulseSequence.spin_echo(1.0 / RATES.decoherence_rate),
        PulseSequence.ramsey(0.5 / RATES.decoherence_rate, math.pi / 3),
        PulseSequence.raman_decay(0.01, Qubit.D),
        PulseSequence.raman_decay(0.01, Qubit.U),
    ],
    ids=lambda seq: seq.name,
)
def test_trajectories_agree_with_the_master_equation(seq):
    result = run_trajectories(UP, seq, RATES, TrajectoryConfig(n_trajectories=4000, seed=11))
    exact = simulate_sequence(UP, seq, RATES)
    assert abs(result.rho_uu - exact.rho_uu) <= 3.0 * result.rho_uu_stderr
    assert result.rho_uu + result.rho_dd == pytest.approx(1.0)


def test_same_seed_same_estimate():
    seq = PulseSequence.spin_echo(0.01)
    cfg = TrajectoryConfig(n_trajectories=600, seed=5)
    first = run_trajectories(UP, seq, RATES, cfg)
    second = run_trajectories(UP, seq, RATES, cfg)
    other = run_trajectories(UP, seq, RATES, TrajectoryConfig(n_trajectories=600, seed=6))
    assert first == second
    assert other.rho_uu != first.rho_uu


def test_each_trajectory_depends_only_on_seed_and_index():
    seq = PulseSequence.spin_echo(0.01)
    short_u, short_d = trajectory_amplitudes(UP, seq, RATES, TrajectoryConfig(n_trajectories=700, seed=3))
    long_u, long_d = trajectory_amplitudes(UP, seq, RATES, TrajectoryConfig(n_trajectories=1000, seed=3))
    np.testing.assert_array_equal(short_u, long_u[:700])
    np.testing.assert_array_equal(short_d, long_d[:700])


def test_pure_dephasing_keeps_populations_and_decays_coherence():
    dephasing = RateSet.from_channels(gamma_du=0.0, gamma_ud=0.0, gamma_el=100.0)
    rho0 = DensityMatrix.from_state(1.0, 1.0)
    t = 0.01
    seq = PulseSequence(segments=(Wait(t),))
    c_u, _ = trajectory_amplitudes(rho0, seq, dephasing, TrajectoryConfig(n_trajectories=2000, seed=1))
    np.testing.assert_allclose(np.abs(c_u) ** 2, 0.5, atol=1e-12)

    result = run_trajectories(rho0, seq, dephasing, TrajectoryConfig(n_trajectories=2000, seed=1))
    expected = 0.5 * math.exp(-0.5 * dephasing.gamma_el * t)
    assert abs(result.rho_ud - expected) <= 3.0 * result.rho_ud_stderr + 1e-3


def test_default_step_is_a_hundredth_of_the_fastest_rate():
    assert resolve_step(RATES, None) == pytest.approx(0.01 / RATES.fastest_rate)


def test_coarse_steps_are_refused():
    with pytest.raises(StepSizeError):
        resolve_step(RATES, 0.06 / RATES.fastest_rate)
    with pytest.raises(StepSizeError):
        run_trajectories(UP, PulseSequence.spin_echo(0.01), RATES,
                         TrajectoryConfig(n_trajectories=10, dt=1.0))


def test_mixed_initial_states_are_refused():
    with pytest.raises(InvalidStateError):
        run_trajectories(DensityMatrix(0.5, 0.5), PulseSequence.spin_echo(0.01), RATES,
                         TrajectoryConfig(n_trajectories=10))


def test_dark_sequences_are_deterministic():
    dark = RateSet.from_channels(0.0, 0.0)
    result = run_trajectories(UP, PulseSequence.spin_echo(0.01), dark, TrajectoryConfig(n_trajectories=50))
    assert result.rho_dd == pytest.approx(1.0, abs=1e-12)
    assert result.rho_uu_stderr == pytest.approx(0.0, abs=1e-6)


def test_seed_range_is_validated():
    with pytest.raises(ValidationError):
        TrajectoryConfig(seed=-1)
    with pytest.raises(ValidationError):
        TrajectoryConfig(n_trajectories=-1)
    assert not TrajectoryConfig(n_trajectories=0).enabled


def test_switched_off_estimate_is_refused():
    with pytest.raises(ConfigError):
        run_trajectories(UP, PulseSequence.spin_echo(0.01), RATES, TrajectoryConfig(n_trajectories=0))


@pytest.mark.parametrize("batch_size", [7, 128, 500, 1000])
def test_trajectories_do_not_depend_on_batch_size(batch_size):
    seq = PulseSequence.spin_echo(0.01)
    reference_u, reference_d = trajectory_amplitudes(UP, seq, RATES, TrajectoryConfig(n_trajectories=700, seed=3))
    c_u, c_d = trajectory_amplitudes(
        UP, seq, RATES, TrajectoryConfig(n_trajectories=700, seed=3, batch_size=batch_size)
    )
    np.testing.assert_array_equal(c_u, reference_u)
    np.testing.assert_array_equal(c_d, reference_d)


@pytest.mark.slow
def test_estimates_cover_the_master_equation_across_seeds():
    seq = PulseSequence.spin_echo(0.25 / RATES.decoherence_rate)
    exact = simulate_sequence(UP, seq, RATES).rho_uu
    dt = 0.0025 / RATES.fastest_rate
    covered = 0
    for seed in range(100):
        result = run_trajectories(UP, seq, RATES, TrajectoryConfig(n_trajectories=10_000, seed=seed, dt=dt))
        if abs(result.rho_uu - exact) <= 3.0 * result.rho_uu_stderr:
            covered += 1
    assert covered >= 99
