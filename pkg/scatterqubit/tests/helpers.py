"""Shared strategies, oracles and hand-built level structures for the test suite."""

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict

from hypothesis import strategies as st
from sympy import S
from sympy.physics.quantum.cg import CG

from scatterqubit.atomic.levels import LevelStructure
from scatterqubit.scattering.laser import LaserField
from scatterqubit.scattering.rates import RateSet
from scatterqubit.utils.constants import Qubit

# Exactly representable energies for hand-built structures
TOY_P32_CENTER = 1e15
TOY_P12_CENTER = 1e15 - 200e9


def symmetric_overrides() -> dict:
    """u and d see identical pi-light couplings and detunings."""
    return {
        "S12_+1/2": 1e9,
        "S12_-1/2": -1e9,
        "P32_+3/2": TOY_P32_CENTER + 3e9,
        "P32_+1/2": TOY_P32_CENTER + 1e9,
        "P32_-1/2": TOY_P32_CENTER - 1e9,
        "P32_-3/2": TOY_P32_CENTER - 3e9,
        "P12_+1/2": TOY_P12_CENTER + 1e9,
        "P12_-1/2": TOY_P12_CENTER - 1e9,
    }


@st.composite
def rate_sets(draw, max_rate: float = 1e3) -> RateSet:
    """Random physical rate sets; Gamma_el_diff follows from the elastic rates."""
    positive = st.floats(min_value=0.0, max_value=max_rate, allow_nan=False, allow_infinity=False)
    du, ud, uu, dd, el = (draw(positive) for _ in range(5))
    return RateSet.from_channels(gamma_du=du, gamma_ud=ud, gamma_uu=uu, gamma_dd=dd, gamma_el=el)


angles = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)


@lru_cache(maxsize=None)
def clebsch_gordan(m: Fraction, J: Fraction, lam: int) -> float:
    """<1/2 m; 1 lam | J, m + lam> straight from sympy."""
    M = m + lam
    if abs(M) > J:
        return 0.0
    half = S(1) / 2
    value = CG(half, S(m.numerator) / m.denominator, 1, lam, S(J.numerator) / J.denominator,
               S(M.numerator) / M.denominator).doit()
    return float(value)


def brute_force_rates(levels: LevelStructure, laser: LaserField) -> Dict[str, float]:
    """Direct sum over intermediate states, independent of the amplitude table."""
    omega0 = laser.absolute_frequency(levels)
    b = laser.components

    def amplitude(i: Qubit, j: Qubit, lam: int) -> float:
        m_i, m_j = levels.ground(i).MJ, levels.ground(j).MJ
        q = lam + int(m_i - m_j)
        if abs(q) > 1:
            return 0.0
        total = 0.0
        for J in (Fraction(1, 2), Fraction(3, 2)):
            level = levels.excited_level(J, m_i + lam)
            if level is None:
                continue
            delta = level.energy - levels.ground(i).energy - omega0
            total += b[lam] * clebsch_gordan(m_i, J, lam) * clebsch_gordan(m_j, J, q) / (2 * math.pi * delta)
        return total

    prefactor = laser.rabi ** 2 * levels.gamma

    def channel(i, j):
        return prefactor * sum(amplitude(i, j, lam) ** 2 for lam in (-1, 0, 1))

    elastic = prefactor * sum(
        (amplitude(Qubit.D, Qubit.D, lam) - amplitude(Qubit.U, Qubit.U, lam)) ** 2 for lam in (-1, 0, 1)
    )
    return {
        "gamma_du": channel(Qubit.D, Qubit.U),
        "gamma_ud": channel(Qubit.U, Qubit.D),
        "gamma_uu": channel(Qubit.U, Qubit.U),
        "gamma_dd": channel(Qubit.D, Qubit.D),
        "gamma_el": elastic,
    }
