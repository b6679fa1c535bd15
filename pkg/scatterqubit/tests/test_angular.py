import math
from fractions import Fraction

import pytest
from hypothesis import given

from scatterqubit.atomic.angular import dipole_ratio, line_strength, linear_polarization

from .helpers import angles, clebsch_gordan

HALF = Fraction(1, 2)
GROUND = (HALF, -HALF)
EXCITED = (Fraction(1, 2), Fraction(3, 2))


@pytest.mark.parametrize(
    "args, expected",
    [
        ((HALF, Fraction(3, 2), Fraction(3, 2), 1), 1.0),
        ((-HALF, Fraction(3, 2), HALF, 1), math.sqrt(1 / 3)),
        ((HALF, Fraction(1, 2), -HALF, -1), math.sqrt(2 / 3)),
    ],
)
def test_reference_elements(args, expected):
    assert dipole_ratio(*args) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("m", GROUND)
@pytest.mark.parametrize("J", EXCITED)
@pytest.mark.parametrize("lam", (-1, 0, 1))
def test_ratio_matches_clebsch_gordan(m, J, lam):
    assert dipole_ratio(m, J, m + lam, lam) == pytest.approx(clebsch_gordan(m, J, lam), abs=1e-12)


@pytest.mark.parametrize(
    "m, J, lam, squared",
    [
        (HALF, Fraction(3, 2), 1, 1.0),
        (HALF, Fraction(3, 2), 0, 2 / 3),
        (HALF, Fraction(1, 2), 0, 1 / 3),
        (HALF, Fraction(3, 2), -1, 1 / 3),
        (HALF, Fraction(1, 2), -1, 2 / 3),
        (-HALF, Fraction(3, 2), -1, 1.0),
        (-HALF, Fraction(3, 2), 1, 1 / 3),
        (-HALF, Fraction(1, 2), 1, 2 / 3),
    ],
)
def test_squared_ratios(m, J, lam, squared):
    assert dipole_ratio(m, J, m + lam, lam) ** 2 == pytest.approx(squared, abs=1e-12)


def test_forbidden_combinations_vanish():
    assert dipole_ratio(HALF, Fraction(3, 2), Fraction(1, 2), 1) == 0.0
    assert dipole_ratio(HALF, Fraction(1, 2), Fraction(3, 2), 1) == 0.0
    assert dipole_ratio(HALF, Fraction(5, 2), Fraction(3, 2), 1) == 0.0
    assert dipole_ratio(HALF, Fraction(3, 2), Fraction(5, 2), 2) == 0.0


@pytest.mark.parametrize("m", GROUND)
def test_line_strength_is_the_same_for_both_ground_levels(m):
    assert line_strength(m) == pytest.approx(3.0, abs=1e-12)


def test_raman_products_for_pi_light_cancel_between_manifolds():
    # d -> |J, -1/2> by pi absorption, then sigma emission into u
    products = [
        dipole_ratio(-HALF, J, -HALF, 0) * dipole_ratio(HALF, J, -HALF, -1)
        for J in EXCITED
    ]
    for product in products:
        assert abs(product) == pytest.approx(math.sqrt(2) / 3, abs=1e-12)
    assert products[0] * products[1] < 0.0


@given(angles)
def test_linear_polarization_is_normalized(theta):
    b = linear_polarization(theta)
    assert sum(v * v for v in b.values()) == pytest.approx(1.0, abs=1e-12)
    assert b[1] == -b[-1]
