import math

import pytest

from scatterqubit.experiment.scaling import ScalingFitError, manifold_margins, scaling_probe
from scatterqubit.scattering.laser import LaserField
from scatterqubit.utils.constants import DEFAULT_RABI
from scatterqubit.utils.exceptions import ConfigError

GENERIC_DETUNINGS = [-40e9, -80e9, -160e9, -320e9, -640e9]
CLOCK_DETUNINGS = [-50e9, -100e9, -200e9, -400e9, -800e9]


def test_generic_qubit_dephases_as_inverse_square(generic_levels):
    laser = LaserField(rabi=DEFAULT_RABI, detuning=-40e9, polarization_angle=math.pi / 4)
    assert scaling_probe(generic_levels, laser, GENERIC_DETUNINGS) == pytest.approx(-2.0, abs=0.1)


def test_clock_qubit_dephases_as_inverse_fourth_power(clock_levels):
    laser = LaserField(rabi=DEFAULT_RABI, detuning=-50e9, polarization_angle=0.0)
    assert scaling_probe(clock_levels, laser, CLOCK_DETUNINGS) == pytest.approx(-4.0, abs=0.2)


def test_other_rates_can_be_fitted(generic_levels):
    laser = LaserField(rabi=DEFAULT_RABI, detuning=-40e9, polarization_angle=math.pi / 4)
    assert scaling_probe(generic_levels, laser, GENERIC_DETUNINGS, rate="gamma_uu") == pytest.approx(-2.0, abs=0.1)


def test_near_resonant_detunings_are_dropped(generic_levels):
    laser = LaserField(rabi=DEFAULT_RABI, detuning=-40e9, polarization_angle=math.pi / 4)
    slope = scaling_probe(generic_levels, laser, [-1e9] + GENERIC_DETUNINGS)
    assert slope == pytest.approx(-2.0, abs=0.1)
    with pytest.raises(ScalingFitError):
        scaling_probe(generic_levels, laser, [-1e9, -2e9, -40e9, -80e9])


def test_unknown_rate_is_a_configuration_error(generic_levels):
    laser = LaserField(rabi=DEFAULT_RABI, detuning=-40e9, polarization_angle=math.pi / 4)
    with pytest.raises(ConfigError):
        scaling_probe(generic_levels, laser, GENERIC_DETUNINGS, rate="gamma_total")


def test_detunings_next_to_the_cycling_line_are_refused(default_levels):
    laser = LaserField(rabi=DEFAULT_RABI, detuning=-56e9, polarization_angle=0.0)
    with pytest.raises(ScalingFitError):
        scaling_probe(default_levels, laser, [-0.05e9, -0.1e9, -0.2e9])


def test_margins_scale_with_each_manifold_spread(generic_levels, default_levels):
    for levels in (generic_levels, default_levels):
        for detunings, margin in manifold_margins(levels).values():
            assert len(detunings) >= 4
            assert margin == pytest.approx(10.0 * (max(detunings) - min(detunings)))
    # the default P3/2 resonances span about 200 GHz
    assert max(margin for _, margin in manifold_margins(default_levels).values()) > 1.5e12
