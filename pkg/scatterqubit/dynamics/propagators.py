"""
Propagators of the qubit master equation under scattering.

With jump operators sqrt(G_ud) s-, sqrt(G_du) s+ and (sqrt(G_el)/2) sz, and the
light shift nulled (no coherent term in the rotating frame):

    d rho_uu / dt = -G_ud rho_uu + G_du rho_dd
    d rho_ud / dt = -(G_Ram + G_el) / 2 * rho_ud
"""

import math

import numpy as np

from scatterqubit.dynamics.density import DensityMatrix, InvalidStateError
from scatterqubit.scattering.rates import RateSet
from scatterqubit.utils.constants import RK4_MAX_STEP_FRACTION
from scatterqubit.utils.exceptions import DomainError


class StepSizeError(DomainError):
    """Raised when an integration step is too coarse for the fastest rate."""


def _check_duration(t: float) -> None:
    if t < 0 or not math.isfinite(t):
        raise InvalidStateError(f"Duration must be finite and non-negative, got {t!r}")


def propagate(rho: DensityMatrix, rates: RateSet, t: float) -> DensityMatrix:
    """
    Exact solution after time t under `rates`.

    Args:
        rho (DensityMatrix): State at the start.
        rates (RateSet): Scattering rates in 1/s.
        t (float): Light time in s.

    Returns:
        DensityMatrix: State after t.

    Raises:
        InvalidStateError: If t is negative or not finite.
    """
    _check_duration(t)
    if rates.gamma_ram > 0.0:
        steady = rates.gamma_du / rates.gamma_ram
        rho_uu = steady + (rho.rho_uu - steady) * math.exp(-rates.gamma_ram * t)
    else:
        rho_uu = rho.rho_uu
    coherence = rho.rho_ud * math.exp(-rates.decoherence_rate * t)
    return DensityMatrix(rho_uu, 1.0 - rho_uu, coherence)


def _derivative(uu: float, dd: float, ud: complex, rates: RateSet) -> tuple[float, float, complex]:
    flow = -rates.gamma_ud * uu + rates.gamma_du * dd
    return flow, -flow, -rates.decoherence_rate * ud


def rk4_propagate(rho: DensityMatrix, rates: RateSet, t: float, dt: float | None = None) -> DensityMatrix:
    """
    Classical fourth-order Runge-Kutta on the same equations, in ceil(t/dt)
    equal steps.

    Args:
        rho (DensityMatrix): State at the start.
        rates (RateSet): Scattering rates in 1/s.
        t (float): Light time in s.
        dt (float | None): Step in s; defaults to the largest allowed step, 0.1 / (G_Ram + G_el).

    Returns:
        DensityMatrix: State after t.

    Raises:
        InvalidStateError: If t is negative or not finite.
        StepSizeError: If dt is not in (0, 0.1 / (G_Ram + G_el)].
    """
    _check_duration(t)
    fastest = rates.fastest_rate
    if fastest == 0.0 or t == 0.0:
        return rho
    limit = RK4_MAX_STEP_FRACTION / fastest
    if dt is None:
        dt = limit
    if dt <= 0 or dt > limit:
        raise StepSizeError(f"RK4 step {dt:.3g} s outside (0, {limit:.3g}] s for fastest rate {fastest:.3g} /s")

    n_steps = math.ceil(t / dt)
    h = t / n_steps
    uu, dd, ud = rho.rho_uu, rho.rho_dd, rho.rho_ud
    for _ in range(n_steps):
        k1 = _derivative(uu, dd, ud, rates)
        k2 = _derivative(uu + 0.5 * h * k1[0], dd + 0.5 * h * k1[1], ud + 0.5 * h * k1[2], rates)
        k3 = _derivative(uu + 0.5 * h * k2[0], dd + 0.5 * h * k2[1], ud + 0.5 * h * k2[2], rates)
        k4 = _derivative(uu + h * k3[0], dd + h * k3[1], ud + h * k3[2], rates)
        uu += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        dd += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        ud += h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
    return DensityMatrix(uu, dd, ud)


def rotation_matrix(theta: float, phase: float) -> np.ndarray:
    """U = exp(-i theta (sx cos(phase) + sy sin(phase)) / 2) in the basis (u, d)."""
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return np.array(
        [
            [c, -1j * s * np.exp(-1j * phase)],
            [-1j * s * np.exp(1j * phase), c],
        ],
        dtype=complex,
    )


def apply_rotation(rho: DensityMatrix, theta: float, phase: float = 0.0) -> DensityMatrix:
    """Instantaneous rotation by `theta` about the equatorial axis at `phase`: U rho U^dagger."""
    u = rotation_matrix(theta, phase)
    rotated = u @ rho.as_matrix() @ u.conj().T
    # hermitize away round-off before the positivity check
    rotated = 0.5 * (rotated + rotated.conj().T)
    return DensityMatrix(rotated[0, 0].real, rotated[1, 1].real, rotated[0, 1])
