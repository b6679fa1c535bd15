"""
Rabi-frequency calibration from measurements.

The laser intensity is rarely known well, but every scattering rate and the
differential light shift scale as Omega_R^2 at fixed detuning and
polarization. Two routes:

- a fitted rate (Gamma_du, Gamma_ud or the spin-echo decoherence rate):
      Omega = Omega_ref sqrt(Gamma_measured / Gamma_model(Omega_ref))
- a table of (polarization angle, light shift): measured and modeled shifts
  are both linear in sin^2(theta), and the squared scale k = (Omega / Omega_ref)^2
  is their one-parameter weighted least-squares ratio.
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Union

import numpy as np

from scatterqubit.atomic.levels import LevelStructure
from scatterqubit.experiment.fitting import DecayFitResult
from scatterqubit.scattering.laser import LaserField
from scatterqubit.scattering.rates import RateSet, rates
from scatterqubit.scattering.stark import stark_components
from scatterqubit.utils.constants import DEFAULT_RESONANCE_FLOOR_HZ, CurveKind
from scatterqubit.utils.exceptions import DomainError
from scatterqubit.utils.logger import logger


class CalibrationError(DomainError):
    """Raised when a measurement cannot fix the Rabi frequency."""


@dataclass(frozen=True)
class StarkMeasurement:
    """Measured differential light shifts (Hz) at linear polarization angles (rad)."""
    angles: np.ndarray
    shifts: np.ndarray
    sigma: Optional[np.ndarray] = None

    @classmethod
    def from_degrees(
        cls,
        angles_deg: Sequence[float],
        shifts: Sequence[float],
        sigma: Optional[Sequence[float]] = None,
    ) -> "StarkMeasurement":
        return cls(
            angles=np.radians(np.asarray(angles_deg, dtype=float)),
            shifts=np.asarray(shifts, dtype=float),
            sigma=None if sigma is None else np.asarray(sigma, dtype=float),
        )


@dataclass(frozen=True)
class RabiCalibration:
    rabi: float
    uncertainty: float
    source: str
    reference_rabi: float

    @property
    def intensity_scale(self) -> float:
        """(Omega / Omega_ref)^2: the factor every modeled rate must be multiplied by."""
        return (self.rabi / self.reference_rabi) ** 2

    def as_dict(self) -> Dict[str, object]:
        return {
            "rabi": self.rabi,
            "uncertainty": self.uncertainty,
            "source": self.source,
            "reference_rabi": self.reference_rabi,
            "intensity_scale": self.intensity_scale,
        }


def _model_rate(rate_set: RateSet, curve: CurveKind) -> float:
    if curve is CurveKind.FROM_D:
        return rate_set.gamma_du
    if curve is CurveKind.FROM_U:
        return rate_set.gamma_ud
    return rate_set.decoherence_rate


def calibrate_from_rate(
    levels: LevelStructure,
    laser: LaserField,
    fit: DecayFitResult,
    floor: float = DEFAULT_RESONANCE_FLOOR_HZ,
) -> RabiCalibration:
    """
    Rabi frequency that makes the modeled rate of `fit.curve` equal the fitted one.

    Args:
        levels (LevelStructure): Level structure.
        laser (LaserField): Reference laser; its Rabi frequency must be positive.
        fit (DecayFitResult): Fitted Gamma_du, Gamma_ud or echo decoherence rate.
        floor (float): Resonance floor in Hz.

    Returns:
        RabiCalibration: Calibrated Rabi frequency with the propagated fit uncertainty.

    Raises:
        CalibrationError: If the reference or the fitted rate is not positive.
    """
    if laser.rabi <= 0.0:
        raise CalibrationError("Reference Rabi frequency must be positive")
    model = _model_rate(rates(levels, laser, floor), fit.curve)
    if model <= 0.0:
        raise CalibrationError(f"Model predicts no {fit.curve.value} scattering for this laser")
    if fit.rate <= 0.0:
        raise CalibrationError(f"Fitted {fit.curve.value} rate must be positive, got {fit.rate:.6g} /s")

    rabi = laser.rabi * math.sqrt(fit.rate / model)
    uncertainty = 0.5 * rabi * fit.uncertainty / fit.rate
    logger.debug(f"{fit.curve.value} rate {fit.rate:.6g} /s against model {model:.6g} /s")
    return RabiCalibration(rabi, uncertainty, f"rate:{fit.curve.value}", laser.rabi)


def calibrate_from_stark(
    levels: LevelStructure,
    laser: LaserField,
    measurement: StarkMeasurement,
    floor: float = DEFAULT_RESONANCE_FLOOR_HZ,
) -> RabiCalibration:
    """
    Rabi frequency whose modeled light-shift curve best matches `measurement`.

    Without `sigma` the uncertainty comes from the residual scatter, which
    needs at least two angles.

    Raises:
        CalibrationError: If the reference Rabi frequency or the modeled shifts
            vanish, the arrays disagree in length, or the best scale is not positive.
    """
    if laser.rabi <= 0.0:
        raise CalibrationError("Reference Rabi frequency must be positive")
    angles, shifts = measurement.angles, measurement.shifts
    if angles.shape != shifts.shape or angles.size == 0:
        raise CalibrationError(f"Need matching angle and shift arrays, got {angles.shape} and {shifts.shape}")

    components = stark_components(levels, laser, floor)
    model = np.array([components.shift(float(theta)) for theta in angles])
    weights = np.ones_like(model) if measurement.sigma is None else 1.0 / measurement.sigma ** 2
    curvature = float(np.sum(weights * model ** 2))
    if curvature == 0.0:
        raise CalibrationError("Modeled light shift vanishes at every measured angle")

    k = float(np.sum(weights * model * shifts)) / curvature
    if k <= 0.0:
        raise CalibrationError(f"Measured shifts have the opposite sign to the model (scale {k:.3g})")
    if measurement.sigma is not None:
        k_err = math.sqrt(1.0 / curvature)
    elif angles.size > 1:
        residual = shifts - k * model
        k_err = math.sqrt(float(np.sum(residual ** 2)) / (angles.size - 1) / curvature)
    else:
        raise CalibrationError("An unweighted light-shift calibration needs at least two angles")

    rabi = laser.rabi * math.sqrt(k)
    return RabiCalibration(rabi, 0.5 * rabi * k_err / k, "stark", laser.rabi)


def calibrate_rabi(
    levels: LevelStructure,
    laser: LaserField,
    measurement: Union[DecayFitResult, StarkMeasurement],
    floor: float = DEFAULT_RESONANCE_FLOOR_HZ,
) -> RabiCalibration:
    """Calibrates from a fitted rate or from a light-shift table, whichever is given."""
    if isinstance(measurement, DecayFitResult):
        result = calibrate_from_rate(levels, laser, measurement, floor)
    else:
        result = calibrate_from_stark(levels, laser, measurement, floor)
    logger.info(
        f"Calibrated Rabi frequency {result.rabi:.6g} +- {result.uncertainty:.3g} rad/s "
        f"from {result.source} (intensity x{result.intensity_scale:.4g})"
    )
    return result
