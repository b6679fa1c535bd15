"""
Laser description used by the scattering calculations.

`LaserField` is the immutable object the physics consumes; `LaserSettings` is
its configuration-side template, which may leave the polarization angle to be
chosen by the light-shift null search ("auto-null").
"""

import math
from dataclasses import dataclass, field, replace
from typing import Dict, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from scatterqubit.atomic.angular import POLARIZATIONS, linear_polarization
from scatterqubit.atomic.levels import LevelStructure
from scatterqubit.utils.constants import AUTO_NULL, DEFAULT_RABI, DEFAULT_RESONANCE_FLOOR_HZ
from scatterqubit.utils.exceptions import ConfigError, DomainError

_NORM_TOLERANCE = 1e-12


class PolarizationError(DomainError):
    """Raised when a polarization is not normalized or not specified exactly once."""


@dataclass(frozen=True)
class LaserField:
    """
    A monochromatic laser. Exactly one of `detuning` (Hz from the cycling
    line) and `omega0` (absolute Hz) is set, and exactly one of
    `polarization_angle` (rad from B, linear polarization) and an explicit
    real `polarization` map lam -> b_lam.
    """

    rabi: float
    detuning: Optional[float] = None
    omega0: Optional[float] = None
    polarization_angle: Optional[float] = None
    polarization: Optional[Dict[int, float]] = None
    _components: Dict[int, float] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if (self.detuning is None) == (self.omega0 is None):
            raise PolarizationError("LaserField needs exactly one of 'detuning' and 'omega0'")
        if (self.polarization_angle is None) == (self.polarization is None):
            raise PolarizationError("LaserField needs exactly one of 'polarization_angle' and 'polarization'")
        if self.polarization_angle is not None:
            components = linear_polarization(self.polarization_angle)
        else:
            unknown = set(self.polarization) - set(POLARIZATIONS)
            if unknown:
                raise PolarizationError(f"Polarization indices must be in {POLARIZATIONS}, got {sorted(unknown)}")
            components = {lam: float(self.polarization.get(lam, 0.0)) for lam in POLARIZATIONS}
        norm = sum(b * b for b in components.values())
        if abs(norm - 1.0) > _NORM_TOLERANCE:
            raise PolarizationError(f"Polarization must satisfy sum |b|^2 = 1, got {norm!r}")
        object.__setattr__(self, "_components", components)

    @property
    def components(self) -> Dict[int, float]:
        """b_lam for lam in (-1, 0, +1)."""
        return dict(self._components)

    def absolute_frequency(self, levels: LevelStructure) -> float:
        if self.omega0 is not None:
            return self.omega0
        return levels.cycling_frequency + self.detuning

    def detuning_from_cycling(self, levels: LevelStructure) -> float:
        if self.detuning is not None:
            return self.detuning
        return self.omega0 - levels.cycling_frequency

    def with_angle(self, theta: float) -> "LaserField":
        return replace(self, polarization_angle=theta, polarization=None)

    def with_detuning(self, detuning: float) -> "LaserField":
        return replace(self, detuning=detuning, omega0=None)

    def with_rabi(self, rabi: float) -> "LaserField":
        return replace(self, rabi=rabi)


class LaserSettings(BaseModel):
    """Configuration template for a LaserField."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    detuning: float = -56e9
    rabi: float = Field(default=DEFAULT_RABI, ge=0)
    polarization_angle_deg: Union[float, Literal["auto-null"]] = AUTO_NULL
    resonance_floor: float = Field(default=DEFAULT_RESONANCE_FLOOR_HZ, gt=0)

    @property
    def auto_null(self) -> bool:
        return self.polarization_angle_deg == AUTO_NULL

    def to_field(self, detuning: Optional[float] = None, polarization_angle: Optional[float] = None) -> LaserField:
        """
        Builds the LaserField. `polarization_angle` (rad) overrides the
        configured angle and is required when the settings say "auto-null".
        """
        if polarization_angle is None:
            if self.auto_null:
                raise ConfigError("Polarization is 'auto-null'; resolve the null angle before building the field")
            polarization_angle = math.radians(self.polarization_angle_deg)
        return LaserField(
            rabi=self.rabi,
            detuning=self.detuning if detuning is None else detuning,
            polarization_angle=polarization_angle,
        )
