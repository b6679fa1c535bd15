"""
Scattering rates from amplitude tables.

    Gamma_ij = Omega_R^2 gamma sum_lam (sum_J A^{i->j}_{J,lam})^2
    Gamma_el = Omega_R^2 gamma sum_lam (sum_J A^{d->d}_{J,lam} - sum_J A^{u->u}_{J,lam})^2

Gamma_el_diff is the comparison model built from the elastic *rates* alone,
stored as 2 (Gamma_uu - Gamma_dd)^2 / (Gamma_uu + Gamma_dd) so that half of it
is that model's contribution to the coherence decay rate.
"""

from dataclasses import asdict, dataclass
from typing import Dict, Mapping

import numpy as np

from scatterqubit.atomic.angular import POLARIZATIONS
from scatterqubit.atomic.levels import LevelStructure
from scatterqubit.scattering.amplitudes import TWO_PI, AmplitudeTable, amplitudes, path_table
from scatterqubit.scattering.laser import LaserField
from scatterqubit.utils.constants import DEFAULT_RESONANCE_FLOOR_HZ, Qubit
from scatterqubit.utils.exceptions import DomainError


@dataclass(frozen=True)
class RateSet:
    """All rates in s^-1. gamma_ram is always gamma_du + gamma_ud."""

    gamma_du: float
    gamma_ud: float
    gamma_uu: float
    gamma_dd: float
    gamma_ram: float
    gamma_el: float
    gamma_el_diff: float

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value >= 0.0:
                raise DomainError(f"Rate {name} must be non-negative, got {value!r}")

    @classmethod
    def from_channels(
        cls,
        gamma_du: float,
        gamma_ud: float,
        gamma_uu: float = 0.0,
        gamma_dd: float = 0.0,
        gamma_el: float = 0.0,
    ) -> "RateSet":
        return cls(
            gamma_du=gamma_du,
            gamma_ud=gamma_ud,
            gamma_uu=gamma_uu,
            gamma_dd=gamma_dd,
            gamma_ram=gamma_du + gamma_ud,
            gamma_el=gamma_el,
            gamma_el_diff=rate_difference_model(gamma_uu, gamma_dd),
        )

    @property
    def decoherence_rate(self) -> float:
        """Decay rate of the qubit coherence, (Gamma_Ram + Gamma_el) / 2."""
        return 0.5 * (self.gamma_ram + self.gamma_el)

    @property
    def fastest_rate(self) -> float:
        return self.gamma_ram + self.gamma_el

    def scaled(self, factor: float) -> "RateSet":
        return RateSet(**{name: value * factor for name, value in asdict(self).items()})

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


def rate_difference_model(gamma_uu: float, gamma_dd: float) -> float:
    """2 (uu - dd)^2 / (uu + dd); 0 when both elastic rates vanish."""
    total = gamma_uu + gamma_dd
    if total == 0.0:
        return 0.0
    return 2.0 * (gamma_uu - gamma_dd) ** 2 / total


def rates_from_amplitudes(table: AmplitudeTable, rabi: float, gamma: float) -> RateSet:
    """
    Squares the J-summed amplitudes into rates.

    Args:
        table (AmplitudeTable): Amplitudes in s/rad.
        rabi (float): Cycling-transition Rabi frequency in rad/s.
        gamma (float): Excited-state decay rate in 1/s.

    Returns:
        RateSet: Raman, elastic and rate-difference rates in 1/s.
    """
    prefactor = rabi * rabi * gamma

    def channel(i: Qubit, j: Qubit) -> float:
        return prefactor * sum(table.summed(i, j, lam) ** 2 for lam in POLARIZATIONS)

    gamma_el = prefactor * sum(
        (table.summed(Qubit.D, Qubit.D, lam) - table.summed(Qubit.U, Qubit.U, lam)) ** 2
        for lam in POLARIZATIONS
    )
    return RateSet.from_channels(
        gamma_du=channel(Qubit.D, Qubit.U),
        gamma_ud=channel(Qubit.U, Qubit.D),
        gamma_uu=channel(Qubit.U, Qubit.U),
        gamma_dd=channel(Qubit.D, Qubit.D),
        gamma_el=gamma_el,
    )


def rates(levels: LevelStructure, laser: LaserField, floor: float = DEFAULT_RESONANCE_FLOOR_HZ) -> RateSet:
    """
    Scattering rates of `laser` on `levels`.

    Args:
        levels (LevelStructure): Level structure.
        laser (LaserField): Laser frequency, polarization and Rabi frequency.
        floor (float): Minimum |delta| in Hz for any allowed intermediate state.

    Returns:
        RateSet: All rates in 1/s.

    Raises:
        OnResonanceError: If the laser is within `floor` of an allowed resonance.
    """
    return rates_from_amplitudes(amplitudes(levels, laser, floor), laser.rabi, levels.gamma)


def rates_on_grid(
    levels: LevelStructure,
    rabi: float,
    omega0: np.ndarray,
    components: Mapping[int, np.ndarray],
) -> Dict[str, np.ndarray]:
    """
    Channel rates at many laser frequencies at once.

    Args:
        levels (LevelStructure): Level structure.
        rabi (float): Cycling-transition Rabi frequency in rad/s.
        omega0 (np.ndarray): Absolute laser frequencies in Hz.
        components (Mapping[int, np.ndarray]): b_lam at each frequency, same shape as `omega0`.

    Returns:
        Dict[str, np.ndarray]: gamma_du, gamma_ud, gamma_uu, gamma_dd and gamma_el arrays,
        the keyword arguments of `RateSet.from_channels`. Points within the
        resonance floor are not masked and may hold inf or nan.
    """
    summed = {(i, j, lam): np.zeros_like(omega0) for i in Qubit for j in Qubit for lam in POLARIZATIONS}
    for path in path_table(levels).scattering:
        summed[(path.i, path.j, path.lam)] += (
            components[path.lam] * path.strength / (TWO_PI * (path.frequency - omega0))
        )

    prefactor = rabi * rabi * levels.gamma

    def channel(i: Qubit, j: Qubit) -> np.ndarray:
        total = np.zeros_like(omega0)
        for lam in POLARIZATIONS:
            total += summed[(i, j, lam)] ** 2
        return prefactor * total

    gamma_el = np.zeros_like(omega0)
    for lam in POLARIZATIONS:
        gamma_el += (summed[(Qubit.D, Qubit.D, lam)] - summed[(Qubit.U, Qubit.U, lam)]) ** 2
    return {
        "gamma_du": channel(Qubit.D, Qubit.U),
        "gamma_ud": channel(Qubit.U, Qubit.D),
        "gamma_uu": channel(Qubit.U, Qubit.U),
        "gamma_dd": channel(Qubit.D, Qubit.D),
        "gamma_el": prefactor * gamma_el,
    }
