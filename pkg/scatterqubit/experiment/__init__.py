from scatterqubit.experiment.calibration import (
    CalibrationError,
    RabiCalibration,
    StarkMeasurement,
    calibrate_rabi,
)
from scatterqubit.experiment.fitting import (
    DecayFitResult,
    DegenerateDataError,
    FitConvergenceError,
    FitError,
    fit_rates,
)
from scatterqubit.experiment.scaling import ScalingFitError, manifold_margins, scaling_probe
from scatterqubit.experiment.sweep import (
    EmptySweepError,
    SweepRow,
    SweepSpec,
    find_crossings,
    raman_population_curve,
    resonance_window,
    spin_echo_curve,
    sweep,
)

__all__ = [
    "CalibrationError",
    "DecayFitResult",
    "DegenerateDataError",
    "EmptySweepError",
    "FitConvergenceError",
    "FitError",
    "RabiCalibration",
    "ScalingFitError",
    "StarkMeasurement",
    "SweepRow",
    "SweepSpec",
    "calibrate_rabi",
    "find_crossings",
    "fit_rates",
    "manifold_margins",
    "raman_population_curve",
    "resonance_window",
    "scaling_probe",
    "spin_echo_curve",
    "sweep",
]
