"""
Differential AC Stark (light) shift of the qubit and polarization nulling.

Second-order shift of qubit level i, in Hz:

    dE_i / h = -(Omega_R^2 / 2 pi) sum_{J,lam} b_lam^2 r^2 / delta_{iJlam}     (delta in rad/s)

so red detuning (delta > 0) lowers the level. The reported shift is
dE_u - dE_d; positive means the qubit frequency increases.

For linear polarization b_0^2 = cos^2(theta) and b_{+-1}^2 = sin^2(theta)/2, so
the shift is linear in sin^2(theta) and is fully described by one
differential sum per polarization index.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

from scatterqubit.atomic.angular import POLARIZATIONS, linear_polarization
from scatterqubit.atomic.levels import LevelStructure
from scatterqubit.scattering.amplitudes import TWO_PI, path_table
from scatterqubit.scattering.laser import LaserField, LaserSettings
from scatterqubit.utils.constants import DEFAULT_RESONANCE_FLOOR_HZ, NULL_ANGLE_XTOL, Qubit
from scatterqubit.utils.exceptions import DomainError
from scatterqubit.utils.logger import logger

HALF_PI = 0.5 * math.pi


class NoNullError(DomainError):
    """Raised when the differential light shift does not change sign on the search interval."""

    def __init__(self, shift_lo: float, shift_hi: float, lo: float = 0.0, hi: float = HALF_PI):
        self.shift_lo = shift_lo
        self.shift_hi = shift_hi
        super().__init__(
            f"No light-shift null on [{math.degrees(lo):.1f}, {math.degrees(hi):.1f}] deg: "
            f"shift is {shift_lo:+.6g} Hz and {shift_hi:+.6g} Hz at the ends"
        )


@dataclass(frozen=True)
class StarkComponents:
    """Differential shift per unit |b_lam|^2, in Hz."""

    per_polarization: Dict[int, float]

    def shift(self, theta: float) -> float:
        b = linear_polarization(theta)
        return sum(b[lam] ** 2 * self.per_polarization[lam] for lam in POLARIZATIONS)

    def shift_for(self, components: Dict[int, float]) -> float:
        return sum(components[lam] ** 2 * self.per_polarization[lam] for lam in POLARIZATIONS)


def stark_components(
    levels: LevelStructure,
    laser: LaserField,
    floor: float = DEFAULT_RESONANCE_FLOOR_HZ,
) -> StarkComponents:
    """
    Per-lam differential sums; the polarization of `laser` is ignored.

    Raises:
        OnResonanceError: If the laser is within `floor` of an allowed resonance.
    """
    table = path_table(levels)
    omega0 = laser.absolute_frequency(levels)
    table.check_off_resonance(omega0, floor)

    prefactor = -laser.rabi ** 2 / TWO_PI
    sums = {lam: 0.0 for lam in POLARIZATIONS}
    for path in table.absorption:
        sign = 1.0 if path.i is Qubit.U else -1.0
        sums[path.lam] += sign * prefactor * path.strength / (TWO_PI * (path.frequency - omega0))
    return StarkComponents(per_polarization=sums)


def differential_stark_shift(
    levels: LevelStructure,
    laser: LaserField,
    floor: float = DEFAULT_RESONANCE_FLOOR_HZ,
) -> float:
    return stark_components(levels, laser, floor).shift_for(laser.components)


def bisect_null(fn: Callable[[float], float], lo: float = 0.0, hi: float = HALF_PI) -> float:
    """
    Root of `fn` on [lo, hi] to NULL_ANGLE_XTOL.

    An endpoint counts as the root only if `fn` vanishes there and not at the
    other end; a shift that is zero at both ends (e.g. no light) has no null.

    Raises:
        NoNullError: If the ends do not bracket a sign change.
    """
    f_lo, f_hi = fn(lo), fn(hi)
    if f_lo == 0.0 and f_hi == 0.0:
        raise NoNullError(f_lo, f_hi, lo, hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise NoNullError(f_lo, f_hi, lo, hi)
    return bisect(fn, lo, hi, xtol=NULL_ANGLE_XTOL, maxiter=200)


def find_null_angle(
    levels: LevelStructure,
    laser: LaserField,
    floor: float = DEFAULT_RESONANCE_FLOOR_HZ,
) -> float:
    """
    Polarization angle where the differential shift vanishes.

    Args:
        levels (LevelStructure): Level structure.
        laser (LaserField): Laser; only its frequency and Rabi frequency matter.
        floor (float): Resonance floor in Hz.

    Returns:
        float: Angle from B in rad, in [0, pi/2].

    Raises:
        NoNullError: If the shift does not change sign on [0, pi/2].
        OnResonanceError: If the laser is within `floor` of an allowed resonance.
    """
    components = stark_components(levels, laser, floor)
    return bisect_null(components.shift)


def stark_table(
    levels: LevelStructure,
    laser: LaserField,
    angles: Sequence[float],
    floor: float = DEFAULT_RESONANCE_FLOOR_HZ,
) -> List[Tuple[float, float]]:
    """(angle rad, shift Hz) at each angle."""
    components = stark_components(levels, laser, floor)
    return [(theta, components.shift(theta)) for theta in angles]


def resolve_polarization(
    levels: LevelStructure,
    settings: LaserSettings,
    detuning_hz: float,
) -> Tuple[LaserField, bool]:
    """
    LaserField for `settings` at `detuning_hz`. With "auto-null" the angle is
    the light-shift null; where no null exists the end of [0, pi/2] with the
    smaller |shift| is used. The flag tells whether a null was found.
    """
    if not settings.auto_null:
        return settings.to_field(detuning=detuning_hz), False

    pi_light = settings.to_field(detuning=detuning_hz, polarization_angle=0.0)
    components = stark_components(levels, pi_light, settings.resonance_floor)
    theta, nulled = null_or_nearest_end(components, detuning_hz)
    return pi_light.with_angle(theta), nulled


def null_or_nearest_end(components: StarkComponents, detuning_hz: float) -> Tuple[float, bool]:
    """(angle, True) at the light-shift null, else (end of [0, pi/2] with smaller |shift|, False)."""
    try:
        return bisect_null(components.shift), True
    except NoNullError as e:
        theta = 0.0 if abs(e.shift_lo) <= abs(e.shift_hi) else HALF_PI
        logger.debug(f"No light-shift null at {detuning_hz / 1e9:.3f} GHz, using {math.degrees(theta):.0f} deg")
        return theta, False


def stark_components_on_grid(levels: LevelStructure, rabi: float, omega0: np.ndarray) -> Dict[int, np.ndarray]:
    """
    Per-lam differential sums (Hz) at every absolute laser frequency in
    `omega0`. No resonance floor is applied; callers mask those points.
    """
    prefactor = -rabi ** 2 / TWO_PI
    sums = {lam: np.zeros_like(omega0) for lam in POLARIZATIONS}
    for path in path_table(levels).absorption:
        sign = 1.0 if path.i is Qubit.U else -1.0
        sums[path.lam] += sign * prefactor * path.strength / (TWO_PI * (path.frequency - omega0))
    return sums
