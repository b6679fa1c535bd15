import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scatterqubit.experiment.calibration import (
    CalibrationError,
    StarkMeasurement,
    calibrate_rabi,
)
from scatterqubit.experiment.fitting import DecayFitResult, fit_rates
from scatterqubit.experiment.sweep import raman_population_curve, spin_echo_curve
from scatterqubit.scattering.laser import LaserField
from scatterqubit.scattering.rates import rates
from scatterqubit.scattering.stark import stark_components
from scatterqubit.utils.constants import DEFAULT_RABI, CurveKind, FitMethod, Qubit
from scatterqubit.utils.file_loader import FileLoaderError, load_stark_csv

REFERENCE = LaserField(rabi=DEFAULT_RABI, detuning=-56e9, polarization_angle=0.4)


def _fit(curve: CurveKind, rate: float, uncertainty: float = 0.0) -> DecayFitResult:
    return DecayFitResult(
        rate=rate, uncertainty=uncertainty, method=FitMethod.FULL_EXPONENTIAL, residual_norm=0.0, curve=curve,
    )


@pytest.mark.parametrize("curve", list(CurveKind))
def test_rate_round_trip(default_levels, curve):
    true = rates(default_levels, REFERENCE.with_rabi(1.7 * DEFAULT_RABI))
    measured = {
        CurveKind.FROM_D: true.gamma_du,
        CurveKind.FROM_U: true.gamma_ud,
        CurveKind.SPIN_ECHO: true.decoherence_rate,
    }[curve]
    result = calibrate_rabi(default_levels, REFERENCE, _fit(curve, measured, 0.02 * measured))
    assert result.rabi == pytest.approx(1.7 * DEFAULT_RABI, rel=1e-12)
    assert result.intensity_scale == pytest.approx(1.7 ** 2, rel=1e-12)
    assert result.uncertainty == pytest.approx(0.01 * result.rabi, rel=1e-9)


@pytest.mark.parametrize("curve", [CurveKind.FROM_D, CurveKind.SPIN_ECHO])
def test_fitted_curves_calibrate_the_laser(default_levels, curve):
    true = rates(default_levels, REFERENCE.with_rabi(0.6 * DEFAULT_RABI))
    if curve is CurveKind.FROM_D:
        times = np.linspace(0.0, 3.0 / true.gamma_ram, 60)
        populations = raman_population_curve(true, Qubit.D, times)
    else:
        times = np.linspace(0.0, 3.0 / true.decoherence_rate, 60)
        populations = spin_echo_curve(true, times)
    result = calibrate_rabi(default_levels, REFERENCE, fit_rates(times, populations, curve))
    assert result.rabi == pytest.approx(0.6 * DEFAULT_RABI, rel=1e-5)


@settings(max_examples=50, deadline=None)
@given(
    scale=st.floats(min_value=0.2, max_value=5.0),
    angles_deg=st.lists(st.floats(min_value=0.0, max_value=90.0), min_size=2, max_size=12, unique=True),
)
def test_noiseless_light_shift_table_round_trip(default_levels, scale, angles_deg):
    components = stark_components(default_levels, REFERENCE.with_rabi(scale * DEFAULT_RABI))
    shifts = [components.shift(math.radians(a)) for a in angles_deg]
    reference = stark_components(default_levels, REFERENCE)
    if all(abs(reference.shift(math.radians(a))) < 1.0 for a in angles_deg):
        return
    result = calibrate_rabi(default_levels, REFERENCE, StarkMeasurement.from_degrees(angles_deg, shifts))
    assert result.rabi == pytest.approx(scale * DEFAULT_RABI, rel=1e-9)


def test_noisy_light_shift_table_with_uncertainties(default_levels):
    rng = np.random.default_rng(8)
    components = stark_components(default_levels, REFERENCE.with_rabi(1.3 * DEFAULT_RABI))
    angles_deg = np.linspace(0.0, 90.0, 19)
    exact = np.array([components.shift(math.radians(a)) for a in angles_deg])
    sigma = np.full_like(exact, 0.01 * np.max(np.abs(exact)))
    measured = exact + sigma * rng.standard_normal(exact.size)

    result = calibrate_rabi(default_levels, REFERENCE, StarkMeasurement.from_degrees(angles_deg, measured, sigma))
    assert result.source == "stark"
    assert abs(result.rabi - 1.3 * DEFAULT_RABI) <= 4.0 * result.uncertainty


def test_inconsistent_measurements_are_refused(default_levels):
    components = stark_components(default_levels, REFERENCE)
    angles_deg = [0.0, 90.0]
    flipped = [-components.shift(math.radians(a)) for a in angles_deg]
    with pytest.raises(CalibrationError):
        calibrate_rabi(default_levels, REFERENCE, StarkMeasurement.from_degrees(angles_deg, flipped))
    with pytest.raises(CalibrationError):
        calibrate_rabi(default_levels, REFERENCE, StarkMeasurement.from_degrees([0.0], [1e5]))
    with pytest.raises(CalibrationError):
        calibrate_rabi(default_levels, REFERENCE, _fit(CurveKind.FROM_D, 0.0))
    with pytest.raises(CalibrationError):
        calibrate_rabi(default_levels, REFERENCE.with_rabi(0.0), _fit(CurveKind.FROM_D, 10.0))


def test_stark_table_loader(tmp_path):
    table = tmp_path / "shifts.csv"
    table.write_text("angle_deg,shift_hz,sigma_hz\n0,-1.5e5,100\n45,2e4,100\n90,1.1e5,100\n")
    angles_deg, shifts, sigma = load_stark_csv(table)
    assert list(angles_deg) == [0.0, 45.0, 90.0]
    assert shifts[0] == -1.5e5
    assert list(sigma) == [100.0] * 3

    table.write_text("0,1.0,0\n90,2.0,1\n")
    with pytest.raises(FileLoaderError):
        load_stark_csv(table)
