"""
Power-law fit of a scattering rate versus detuning.

Generic two-level systems decohere elastically as 1/Delta^2; clock-like
qubits, whose levels couple identically to the light apart from the qubit
splitting, as 1/Delta^4.
"""

import math
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from scatterqubit.atomic.levels import LevelStructure
from scatterqubit.experiment.sweep import RATE_FIELDS
from scatterqubit.scattering.laser import LaserField
from scatterqubit.scattering.rates import rates
from scatterqubit.utils.constants import DEFAULT_RESONANCE_FLOOR_HZ, SCALING_DECADE_FACTOR
from scatterqubit.utils.exceptions import ConfigError, DomainError
from scatterqubit.utils.logger import logger


class ScalingFitError(DomainError):
    """Raised when fewer than three detunings are usable."""


def manifold_margins(levels: LevelStructure) -> Dict[Fraction, Tuple[List[float], float]]:
    """
    Resonance detunings of each excited manifold and the clearance a
    detuning needs from them: SCALING_DECADE_FACTOR times the manifold's
    Zeeman spread (floored at the resonance floor).

    Returns:
        Dict[Fraction, Tuple[List[float], float]]: J -> (resonance detunings, margin in Hz).
    """
    grouped: Dict[Fraction, List[float]] = {}
    for resonance in levels.resonances():
        grouped.setdefault(resonance.excited.J, []).append(resonance.detuning)
    margins = {}
    for J, detunings in grouped.items():
        spread = max(max(detunings) - min(detunings), DEFAULT_RESONANCE_FLOOR_HZ)
        margins[J] = (detunings, SCALING_DECADE_FACTOR * spread)
    return margins


def _far_from_resonances(margins: Dict[Fraction, Tuple[List[float], float]], detuning: float) -> bool:
    """True when `detuning` clears every resonance of every manifold by that manifold's margin."""
    for detunings, margin in margins.values():
        if any(abs(detuning - res) < margin for res in detunings):
            return False
    return True


def scaling_probe(
    levels: LevelStructure,
    laser: LaserField,
    detunings: Sequence[float],
    rate: str = "gamma_el",
) -> float:
    """
    Least-squares slope of log(rate) versus log|Delta|.

    Args:
        levels (LevelStructure): Level structure to scan.
        laser (LaserField): Template; only its detuning is replaced.
        detunings (Sequence[float]): Candidate detunings (Hz from the cycling line).
        rate (str): RateSet field to fit, default "gamma_el".

    Returns:
        float: Fitted exponent.

    Raises:
        ConfigError: If `rate` is not a RateSet field.
        ScalingFitError: If fewer than three detunings clear every resonance manifold.
    """
    if rate not in RATE_FIELDS:
        raise ConfigError(f"Unknown rate '{rate}'; choose one of {', '.join(RATE_FIELDS)}")

    margins = manifold_margins(levels)
    xs, ys = [], []
    for detuning in detunings:
        if detuning == 0.0 or not _far_from_resonances(margins, detuning):
            logger.warning(
                f"Dropping {detuning / 1e9:.3f} GHz from the scaling fit: "
                f"closer to a resonance than {SCALING_DECADE_FACTOR:g}x its manifold's spread"
            )
            continue
        value = getattr(rates(levels, laser.with_detuning(detuning)), rate)
        if value <= 0.0:
            logger.warning(f"Dropping {detuning / 1e9:.3f} GHz from the scaling fit: {rate} is {value:.3g}")
            continue
        xs.append(math.log(abs(detuning)))
        ys.append(math.log(value))

    if len(xs) < 3:
        raise ScalingFitError(f"Scaling fit needs at least 3 usable detunings, got {len(xs)}")
    slope, _ = np.polyfit(np.array(xs), np.array(ys), 1)
    logger.debug(f"{rate} scales as |Delta|^{slope:.4f} over {len(xs)} detunings")
    return float(slope)
