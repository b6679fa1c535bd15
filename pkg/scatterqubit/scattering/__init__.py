from scatterqubit.scattering.amplitudes import AmplitudeTable, OnResonanceError, PathTable, amplitudes, path_table
from scatterqubit.scattering.laser import LaserField, LaserSettings, PolarizationError
from scatterqubit.scattering.rates import RateSet, rate_difference_model, rates, rates_from_amplitudes, rates_on_grid
from scatterqubit.scattering.stark import (
    NoNullError,
    StarkComponents,
    bisect_null,
    differential_stark_shift,
    find_null_angle,
    null_or_nearest_end,
    resolve_polarization,
    stark_components,
    stark_components_on_grid,
    stark_table,
)

__all__ = [
    "AmplitudeTable",
    "LaserField",
    "LaserSettings",
    "NoNullError",
    "OnResonanceError",
    "PathTable",
    "PolarizationError",
    "RateSet",
    "StarkComponents",
    "amplitudes",
    "bisect_null",
    "differential_stark_shift",
    "find_null_angle",
    "null_or_nearest_end",
    "path_table",
    "rate_difference_model",
    "rates",
    "rates_from_amplitudes",
    "rates_on_grid",
    "resolve_polarization",
    "stark_components",
    "stark_components_on_grid",
    "stark_table",
]
