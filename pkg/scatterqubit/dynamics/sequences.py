"""
Pulse sequences: instantaneous rotations and light-on / light-off waits.
"""

import math
from dataclasses import dataclass
from typing import Iterator, Tuple, Union

from scatterqubit.dynamics.density import DensityMatrix, InvalidStateError
from scatterqubit.dynamics.propagators import apply_rotation, propagate, rk4_propagate
from scatterqubit.scattering.rates import RateSet
from scatterqubit.utils.constants import Qubit

DARK = RateSet.from_channels(0.0, 0.0)


@dataclass(frozen=True)
class Rotate:
    """Instantaneous rotation by `theta` about the equatorial axis at angle `phase`."""
    theta: float
    phase: float = 0.0


@dataclass(frozen=True)
class Wait:
    duration: float
    light: bool = True

    def __post_init__(self):
        if self.duration < 0 or not math.isfinite(self.duration):
            raise InvalidStateError(f"Wait duration must be finite and non-negative, got {self.duration!r}")


Segment = Union[Rotate, Wait]


@dataclass(frozen=True)
class PulseSequence:
    segments: Tuple[Segment, ...]
    name: str = "custom"

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.segments)

    def __len__(self) -> int:
        return len(self.segments)

    @property
    def light_time(self) -> float:
        return sum(s.duration for s in self.segments if isinstance(s, Wait) and s.light)

    @classmethod
    def spin_echo(cls, tau: float) -> "PulseSequence":
        """
        pi/2 - T - pi - 2T - pi - T - pi/2 with T = tau/4, every pulse at phase 0.
        Starting from |u> the ideal end state is |d>.
        """
        quarter = 0.25 * tau
        return cls(
            segments=(
                Rotate(math.pi / 2),
                Wait(quarter),
                Rotate(math.pi),
                Wait(quarter),
                Wait(quarter),
                Rotate(math.pi),
                Wait(quarter),
                Rotate(math.pi / 2),
            ),
            name="spin_echo",
        )

    @classmethod
    def ramsey(cls, tau: float, phase: float = 0.0) -> "PulseSequence":
        return cls(segments=(Rotate(math.pi / 2), Wait(tau), Rotate(math.pi / 2, phase)), name="ramsey")

    @classmethod
    def raman_decay(cls, t: float, initial: Qubit) -> "PulseSequence":
        """
        Raman calibration from |u>: light only (decay of u, `initial`=u) or a
        pi pulse first (growth of u out of d, `initial`=d).
        """
        if Qubit(initial) is Qubit.D:
            return cls(segments=(Rotate(math.pi), Wait(t)), name="raman_from_d")
        return cls(segments=(Wait(t),), name="raman_from_u")


def simulate_sequence(
    rho0: DensityMatrix,
    seq: PulseSequence,
    rates: RateSet,
    integrator: str = "exact",
) -> DensityMatrix:
    """Applies every segment in order; light-off waits evolve with zero rates."""
    if integrator not in ("exact", "rk4"):
        raise ValueError(f"Unknown integrator '{integrator}'")
    rho = rho0
    for segment in seq:
        if isinstance(segment, Rotate):
            rho = apply_rotation(rho, segment.theta, segment.phase)
            continue
        segment_rates = rates if segment.light else DARK
        if integrator == "rk4":
            rho = rk4_propagate(rho, segment_rates, segment.duration)
        else:
            rho = propagate(rho, segment_rates, segment.duration)
    return rho


def spin_echo_analytic(rates: RateSet, tau: float) -> float:
    """Final rho_uu of the spin echo: (1 - exp(-(G_Ram + G_el) tau / 2)) / 2."""
    return 0.5 * (1.0 - math.exp(-rates.decoherence_rate * tau))


def ramsey_analytic(rates: RateSet, tau: float, phase: float = 0.0) -> float:
    """Final rho_uu of the Ramsey sequence: (1 - cos(phase) exp(-(G_Ram + G_el) tau / 2)) / 2."""
    return 0.5 * (1.0 - math.cos(phase) * math.exp(-rates.decoherence_rate * tau))
