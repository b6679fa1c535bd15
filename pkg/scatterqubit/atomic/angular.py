"""
Angular factors of the S1/2 <-> P1/2, P3/2 electric-dipole transitions.

Matrix elements follow the Wigner-Eckart theorem

    <J, M | d . eps_lam | 1/2, m>  ~  (-1)^(J - M) (J 1 1/2; -M lam m) <J||d||1/2>

with <P3/2||d||S1/2> / <P1/2||d||S1/2> = sqrt(2). Ratios are normalized to the
cycling transition |1/2,+1/2> -> |3/2,+3/2> (lam = +1), which is 1.

Spherical polarization basis: eps_{+-1} = -+(x +- iy)/sqrt(2), eps_0 = z.
"""

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict

HALF = Fraction(1, 2)
EXCITED_J = (Fraction(1, 2), Fraction(3, 2))
POLARIZATIONS = (-1, 0, 1)

_REDUCED_ELEMENT = {Fraction(1, 2): 1.0, Fraction(3, 2): math.sqrt(2.0)}


def _rational(value: Fraction):
    from sympy import Rational

    return Rational(value.numerator, value.denominator)


@lru_cache(maxsize=None)
def _raw_element(ground_mj: Fraction, J: Fraction, MJ: Fraction, lam: int) -> float:
    # sympy is slow to import; only the first evaluation pays for it
    from sympy.physics.wigner import wigner_3j

    symbol = wigner_3j(_rational(J), 1, _rational(HALF), _rational(-MJ), lam, _rational(ground_mj))
    if symbol == 0:
        return 0.0
    phase = -1.0 if (J - MJ) % 2 else 1.0
    return phase * float(symbol) * _REDUCED_ELEMENT[J]


def dipole_ratio(ground_mj: Fraction, J: Fraction, MJ: Fraction, lam: int) -> float:
    """
    Dipole matrix element <J, MJ | d . eps_lam | 1/2, ground_mj> in units of
    the cycling-transition element. Zero for forbidden combinations
    (MJ != ground_mj + lam, |MJ| > J, J not in {1/2, 3/2}).

    Examples:
        dipole_ratio(1/2, 3/2, 3/2, +1)  ->  1
        dipole_ratio(-1/2, 3/2, 1/2, +1) ->  sqrt(1/3)
        dipole_ratio(1/2, 1/2, -1/2, -1) -> +sqrt(2/3)
    """
    ground_mj, J, MJ = Fraction(ground_mj), Fraction(J), Fraction(MJ)
    if J not in _REDUCED_ELEMENT or lam not in POLARIZATIONS:
        return 0.0
    if abs(ground_mj) != HALF or abs(MJ) > J or MJ != ground_mj + lam:
        return 0.0
    return _raw_element(ground_mj, J, MJ, lam) / _cycling_element()


@lru_cache(maxsize=1)
def _cycling_element() -> float:
    return _raw_element(HALF, Fraction(3, 2), Fraction(3, 2), 1)


def line_strength(ground_mj: Fraction) -> float:
    """Sum of squared dipole ratios over every excited sublevel and polarization."""
    total = 0.0
    for J in EXCITED_J:
        for lam in POLARIZATIONS:
            MJ = Fraction(ground_mj) + lam
            total += dipole_ratio(ground_mj, J, MJ, lam) ** 2
    return total


def linear_polarization(theta: float) -> Dict[int, float]:
    """
    Spherical components b_lam of a linear polarization at angle theta to the
    quantization axis: b_0 = cos(theta), b_{+-1} = -+ sin(theta)/sqrt(2).
    """
    s = math.sin(theta) / math.sqrt(2.0)
    return {-1: s, 0: math.cos(theta), 1: -s}
