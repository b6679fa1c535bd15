"""
Monte Carlo quantum-jump unraveling of the scattering master equation.

Jump operators: sqrt(G_ud) s- (u -> d), sqrt(G_du) s+ (d -> u) and
(sqrt(G_el)/2) sz. Per step of length dt a trajectory jumps with first-order
probabilities

    p_ud = G_ud |c_u|^2 dt,   p_du = G_du |c_d|^2 dt,   p_z = G_el dt / 4

and otherwise evolves under the non-Hermitian Hamiltonian and is renormalized.
Trajectories run vectorized in batches. Random numbers come from fixed-width
blocks of trajectory indices: block b draws full-width arrays from
PCG64(SeedSequence(seed, spawn_key=(b,))), so each trajectory's stream depends
only on (seed, index), whatever the batch size or trajectory count.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from scatterqubit.dynamics.density import DensityMatrix
from scatterqubit.dynamics.propagators import StepSizeError, rotation_matrix
from scatterqubit.dynamics.sequences import PulseSequence, Rotate
from scatterqubit.scattering.rates import RateSet
from scatterqubit.utils.config import config
from scatterqubit.utils.constants import (
    TRAJECTORY_BATCH_SIZE,
    TRAJECTORY_DEFAULT_STEP_FRACTION,
    TRAJECTORY_MAX_STEP_FRACTION,
    TRAJECTORY_STREAM_BLOCK,
)
from scatterqubit.utils.exceptions import ConfigError
from scatterqubit.utils.logger import logger


class TrajectoryConfig(BaseModel):
    """`n_trajectories` = 0 turns the Monte Carlo estimate off."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_trajectories: int = Field(default=2000, ge=0)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    dt: Optional[float] = Field(default=None, gt=0)
    batch_size: int = Field(default=TRAJECTORY_BATCH_SIZE, ge=1)

    @property
    def enabled(self) -> bool:
        return self.n_trajectories > 0


@dataclass(frozen=True)
class TrajectoryResult:
    rho_uu: float
    rho_dd: float
    rho_ud: complex
    rho_uu_stderr: float
    rho_ud_stderr: float
    seed: int
    n_trajectories: int
    dt: float

    @property
    def rho_dd_stderr(self) -> float:
        return self.rho_uu_stderr


def resolve_step(rates: RateSet, dt: Optional[float]) -> float:
    """Step size for `rates`: the configured dt, or 0.01 / fastest rate."""
    fastest = rates.fastest_rate
    if dt is None:
        return TRAJECTORY_DEFAULT_STEP_FRACTION / fastest if fastest > 0 else math.inf
    if dt * fastest >= TRAJECTORY_MAX_STEP_FRACTION:
        raise StepSizeError(
            f"Trajectory step {dt:.3g} s too coarse: dt * fastest rate = {dt * fastest:.3g} >= "
            f"{TRAJECTORY_MAX_STEP_FRACTION}"
        )
    return dt


def _block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


class _BlockStreams:
    """Uniform draws for trajectories [start, start + n), cut from per-block streams."""

    def __init__(self, seed: int, start: int, n: int):
        width = TRAJECTORY_STREAM_BLOCK
        first, last = start // width, (start + n - 1) // width
        self._blocks: List[Tuple[np.random.Generator, int, int]] = [
            (_block_generator(seed, block), max(start - block * width, 0), min(start + n - block * width, width))
            for block in range(first, last + 1)
        ]

    def random(self) -> np.ndarray:
        return np.concatenate([rng.random(TRAJECTORY_STREAM_BLOCK)[lo:hi] for rng, lo, hi in self._blocks])


def _light_step(c_u: np.ndarray, c_d: np.ndarray, rates: RateSet, h: float, streams: _BlockStreams) -> None:
    draw_jump = streams.random()
    draw_channel = streams.random()

    p_ud = rates.gamma_ud * np.abs(c_u) ** 2 * h
    p_du = rates.gamma_du * np.abs(c_d) ** 2 * h
    p_z = rates.gamma_el * h / 4.0
    p_total = p_ud + p_du + p_z

    jumped = draw_jump < p_total
    pick = draw_channel * p_total
    to_d = jumped & (pick < p_ud)
    to_u = jumped & ~to_d & (pick < p_ud + p_du)
    dephase = jumped & ~to_d & ~to_u

    stay = ~jumped
    c_u[stay] *= math.exp(-0.5 * rates.gamma_ud * h)
    c_d[stay] *= math.exp(-0.5 * rates.gamma_du * h)
    norm = np.sqrt(np.abs(c_u[stay]) ** 2 + np.abs(c_d[stay]) ** 2)
    c_u[stay] /= norm
    c_d[stay] /= norm

    c_u[to_d], c_d[to_d] = 0.0, 1.0
    c_u[to_u], c_d[to_u] = 1.0, 0.0
    c_d[dephase] *= -1.0


def _run_batch(
    c_u0: complex,
    c_d0: complex,
    seq: PulseSequence,
    rates: RateSet,
    dt: float,
    streams: _BlockStreams,
    n: int,
) -> tuple[np.ndarray, np.ndarray]:
    c_u = np.full(n, c_u0, dtype=complex)
    c_d = np.full(n, c_d0, dtype=complex)
    for segment in seq:
        if isinstance(segment, Rotate):
            u = rotation_matrix(segment.theta, segment.phase)
            c_u, c_d = u[0, 0] * c_u + u[0, 1] * c_d, u[1, 0] * c_u + u[1, 1] * c_d
            continue
        if not segment.light or segment.duration == 0.0 or rates.fastest_rate == 0.0:
            continue
        n_steps = math.ceil(segment.duration / dt)
        h = segment.duration / n_steps
        for _ in range(n_steps):
            _light_step(c_u, c_d, rates, h, streams)
    return c_u, c_d


def trajectory_amplitudes(
    rho0: DensityMatrix,
    seq: PulseSequence,
    rates: RateSet,
    tcfg: TrajectoryConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Final (c_u, c_d) of every trajectory, in trajectory-index order."""
    c_u0, c_d0 = rho0.state_vector()
    dt = resolve_step(rates, tcfg.dt)

    n_total = tcfg.n_trajectories
    size = tcfg.batch_size
    n_batches = math.ceil(n_total / size)
    final_u = np.empty(n_total, dtype=complex)
    final_d = np.empty(n_total, dtype=complex)

    batches = tqdm(range(n_batches), desc="trajectories", disable=not config.show_progress)
    for batch in batches:
        start = batch * size
        n = min(size, n_total - start)
        c_u, c_d = _run_batch(c_u0, c_d0, seq, rates, dt, _BlockStreams(tcfg.seed, start, n), n)
        final_u[start:start + n] = c_u
        final_d[start:start + n] = c_d
    return final_u, final_d


def run_trajectories(
    rho0: DensityMatrix,
    seq: PulseSequence,
    rates: RateSet,
    tcfg: TrajectoryConfig,
) -> TrajectoryResult:
    """
    Monte Carlo estimate of the final density matrix.

    Args:
        rho0 (DensityMatrix): Pure initial state.
        seq (PulseSequence): Sequence to unravel.
        rates (RateSet): Scattering rates during light segments.
        tcfg (TrajectoryConfig): Trajectory count, seed, step and batch size.

    Returns:
        TrajectoryResult: Means and standard errors over all trajectories.

    Raises:
        ConfigError: If the Monte Carlo estimate is turned off (n_trajectories = 0).
        InvalidStateError: If rho0 is not pure.
        StepSizeError: If the configured dt is too coarse for `rates`.
    """
    if not tcfg.enabled:
        raise ConfigError("Monte Carlo estimate is off (trajectories.n_trajectories = 0)")
    dt = resolve_step(rates, tcfg.dt)
    final_u, final_d = trajectory_amplitudes(rho0, seq, rates, tcfg)
    n_total = tcfg.n_trajectories

    pop_u = np.abs(final_u) ** 2
    coherence = final_u * np.conj(final_d)
    rho_uu = float(np.mean(pop_u))
    rho_ud = complex(np.mean(coherence))
    rho_uu_stderr = math.sqrt(max(rho_uu * (1.0 - rho_uu), 0.0) / n_total)
    rho_ud_stderr = float(np.std(coherence) / math.sqrt(n_total)) if n_total > 1 else 0.0

    logger.debug(
        f"{n_total} trajectories (seed {tcfg.seed}, dt {dt:.3g} s): "
        f"rho_uu = {rho_uu:.6f} +- {rho_uu_stderr:.6f}"
    )
    return TrajectoryResult(
        rho_uu=rho_uu,
        rho_dd=1.0 - rho_uu,
        rho_ud=rho_ud,
        rho_uu_stderr=rho_uu_stderr,
        rho_ud_stderr=rho_ud_stderr,
        seed=tcfg.seed,
        n_trajectories=n_total,
        dt=dt,
    )
