"""
Kramers-Heisenberg scattering amplitudes between the qubit levels.

For a photon absorbed with polarization lam from qubit level i and emitted
into level j through the intermediate sublevel |J, m_i + lam>:

    A^{i->j}_{J,lam} = b_lam * r(j <- J M, lam + (m_i - m_j)) * r(J M <- i, lam) / delta

where r are dipole ratios (units of the cycling element) and delta is the
intermediate-state detuning in rad/s. Amplitudes carry units of s/rad.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Dict, Iterator, List, Tuple

from scatterqubit.atomic.angular import EXCITED_J, POLARIZATIONS, dipole_ratio
from scatterqubit.atomic.levels import LevelStructure
from scatterqubit.scattering.laser import LaserField
from scatterqubit.utils.constants import DEFAULT_RESONANCE_FLOOR_HZ, Qubit
from scatterqubit.utils.exceptions import DomainError

TWO_PI = 2.0 * math.pi

AmplitudeKey = Tuple[Qubit, Qubit, Fraction, int]


class OnResonanceError(DomainError):
    """Raised when an allowed intermediate state lies inside the resonance floor."""

    def __init__(self, qubit: Qubit, J: Fraction, lam: int, delta_hz: float, floor_hz: float):
        self.qubit = qubit
        self.J = J
        self.lam = lam
        self.delta_hz = delta_hz
        self.floor_hz = floor_hz
        super().__init__(
            f"Laser is {delta_hz / 1e6:+.3f} MHz from the {qubit.value} -> J={J}, lam={lam:+d} "
            f"intermediate state (floor {floor_hz / 1e6:g} MHz)"
        )


def emitted_polarization(i: Qubit, j: Qubit, lam: int) -> int:
    """lam + (m_i - m_j): polarization index of the emitted photon."""
    return lam + int(i.mj - j.mj)


@dataclass(frozen=True)
class ScatteringPath:
    """
    One allowed i -> |J, m_i + lam> -> j path. `strength` is the product of
    the absorption and emission dipole ratios, `frequency` the absolute
    i -> |J, M> transition frequency in Hz.
    """
    i: Qubit
    j: Qubit
    J: Fraction
    lam: int
    strength: float
    frequency: float


@dataclass(frozen=True)
class AbsorptionPath:
    """Dipole-allowed absorption i -> |J, m_i + lam>; `strength` is the squared ratio."""
    i: Qubit
    J: Fraction
    lam: int
    strength: float
    frequency: float


@dataclass(frozen=True)
class PathTable:
    """Angular factors and transition frequencies of a LevelStructure, fixed for every laser."""
    scattering: Tuple[ScatteringPath, ...]
    absorption: Tuple[AbsorptionPath, ...]
    cycling_frequency: float

    def check_off_resonance(self, omega0: float, floor: float = DEFAULT_RESONANCE_FLOOR_HZ) -> None:
        """
        Raises:
            OnResonanceError: If any absorption path lies within `floor` Hz of `omega0`.
        """
        for path in self.absorption:
            delta = path.frequency - omega0
            if abs(delta) < floor:
                raise OnResonanceError(path.i, path.J, path.lam, delta, floor)


@lru_cache(maxsize=64)
def path_table(levels: LevelStructure) -> PathTable:
    """Builds (once per structure) every non-zero scattering and absorption path."""
    scattering: List[ScatteringPath] = []
    absorption: List[AbsorptionPath] = []
    for i in Qubit:
        ground = levels.ground(i)
        m_i = ground.MJ
        for J in EXCITED_J:
            for lam in POLARIZATIONS:
                level = levels.excited_level(J, m_i + lam)
                ratio_in = dipole_ratio(m_i, J, m_i + lam, lam)
                if level is None or ratio_in == 0.0:
                    continue
                frequency = level.energy - ground.energy
                absorption.append(AbsorptionPath(i, J, lam, ratio_in * ratio_in, frequency))
                for j in Qubit:
                    q_out = emitted_polarization(i, j, lam)
                    if q_out not in POLARIZATIONS:
                        continue
                    ratio_out = dipole_ratio(levels.ground(j).MJ, J, m_i + lam, q_out)
                    if ratio_out != 0.0:
                        scattering.append(ScatteringPath(i, j, J, lam, ratio_out * ratio_in, frequency))
    return PathTable(
        scattering=tuple(scattering),
        absorption=tuple(absorption),
        cycling_frequency=levels.cycling_frequency,
    )


def absorption_paths(levels: LevelStructure) -> Iterator[Tuple[Qubit, Fraction, int]]:
    """Every (i, J, lam) whose absorption element is non-zero."""
    for path in path_table(levels).absorption:
        yield path.i, path.J, path.lam


def check_off_resonance(levels: LevelStructure, omega0: float, floor: float = DEFAULT_RESONANCE_FLOOR_HZ) -> None:
    """Raises OnResonanceError if any dipole-allowed intermediate state is within `floor` Hz."""
    path_table(levels).check_off_resonance(omega0, floor)


@dataclass(frozen=True)
class AmplitudeTable:
    """(i, j, J, lam) -> amplitude (s/rad). Forbidden entries are exactly 0."""

    entries: Dict[AmplitudeKey, float]

    def __getitem__(self, key: AmplitudeKey) -> float:
        i, j, J, lam = key
        return self.entries[(Qubit(i), Qubit(j), Fraction(J), lam)]

    def summed(self, i: Qubit, j: Qubit, lam: int) -> float:
        """Sum over both excited manifolds: the amplitude that is squared into a rate."""
        return sum(self[(i, j, J, lam)] for J in EXCITED_J)


def amplitudes(
    levels: LevelStructure,
    laser: LaserField,
    floor: float = DEFAULT_RESONANCE_FLOOR_HZ,
) -> AmplitudeTable:
    """
    Kramers-Heisenberg amplitude of every (i, j, J, lam) path.

    Args:
        levels (LevelStructure): Level structure.
        laser (LaserField): Laser frequency, polarization and Rabi frequency.
        floor (float): Minimum |delta| in Hz for any allowed intermediate state.

    Returns:
        AmplitudeTable: All 24 entries, forbidden ones exactly 0.

    Raises:
        OnResonanceError: If the laser is within `floor` of an allowed resonance.
    """
    table = path_table(levels)
    omega0 = laser.absolute_frequency(levels)
    table.check_off_resonance(omega0, floor)
    b = laser.components

    entries: Dict[AmplitudeKey, float] = {
        (i, j, J, lam): 0.0 for i in Qubit for j in Qubit for J in EXCITED_J for lam in POLARIZATIONS
    }
    for path in table.scattering:
        if b[path.lam] == 0.0:
            continue
        entries[(path.i, path.j, path.J, path.lam)] = (
            b[path.lam] * path.strength / (TWO_PI * (path.frequency - omega0))
        )
    return AmplitudeTable(entries=entries)
