from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from scatterqubit.atomic.levels import (
    LevelStructureError,
    PhysicalConfig,
    build_levels,
    detuning,
    format_label,
    parse_label,
    solve_magnetic_field,
)
from scatterqubit.experiment.sweep import resonance_window
from scatterqubit.utils.constants import Qubit, Term


def test_default_calibration_reproduces_qubit_splitting(default_levels):
    assert default_levels.qubit_splitting == pytest.approx(124.1e9, abs=1e6)


def test_calibrated_field_is_a_few_tesla(default_levels):
    assert 4.40 < default_levels.magnetic_field < 4.52


def test_pi_resonances_near_expected_values(default_levels):
    lo, hi = resonance_window(default_levels)
    assert lo == pytest.approx(-79.4e9, abs=5e9)
    assert hi == pytest.approx(-37.7e9, abs=5e9)


def test_resonance_window_exact_with_overrides():
    e_u, e_d, top = 62.05e9, -62.05e9, 1e15
    overrides = {
        "S12_+1/2": e_u,
        "S12_-1/2": e_d,
        "P32_+3/2": top,
        "P32_+1/2": top - 79.4e9,
        "P32_-1/2": top - (e_u - e_d) - 37.7e9,
    }
    levels = build_levels(PhysicalConfig(level_overrides=overrides))
    lo, hi = resonance_window(levels)
    assert lo == pytest.approx(-79.4e9, abs=1.0)
    assert hi == pytest.approx(-37.7e9, abs=1.0)


def test_overrides_replace_energies_verbatim():
    cfg = PhysicalConfig(level_overrides={"P12_-1/2": 957.3e12})
    first, second = build_levels(cfg), build_levels(cfg)
    level = first.excited_level(Fraction(1, 2), Fraction(-1, 2))
    assert level.energy == 957.3e12
    assert first == second


def test_excited_manifold_holds_each_sublevel_once(default_levels):
    keys = {(level.J, level.MJ) for level in default_levels.excited}
    assert len(keys) == len(default_levels.excited) == 6


@pytest.mark.parametrize("label", ["P32_+5/2", "D52_+1/2", "S12_+1", "P12_3/2"])
def test_unknown_override_labels_rejected(label):
    with pytest.raises(ValidationError):
        PhysicalConfig(level_overrides={label: 1.0})


def test_label_round_trip():
    term, MJ = parse_label("P32_-3/2")
    assert term is Term.P32 and MJ == Fraction(-3, 2)
    assert format_label(term, MJ) == "P32_-3/2"


def test_inverted_qubit_rejected():
    cfg = PhysicalConfig(level_overrides={"S12_+1/2": -1e9, "S12_-1/2": 1e9})
    with pytest.raises(LevelStructureError):
        build_levels(cfg)


def test_field_and_splitting_are_exclusive():
    with pytest.raises(ValidationError):
        PhysicalConfig(magnetic_field=4.5, qubit_splitting=124e9)
    assert PhysicalConfig(magnetic_field=4.5).qubit_splitting is None


def test_unreachable_splitting_raises():
    with pytest.raises(LevelStructureError):
        solve_magnetic_field(PhysicalConfig(), 1e20)
    with pytest.raises(LevelStructureError):
        solve_magnetic_field(PhysicalConfig(), -1.0)


def test_nuclear_zeeman_term_is_common_to_all_levels():
    plain = build_levels(PhysicalConfig(magnetic_field=4.5))
    shifted = build_levels(PhysicalConfig(magnetic_field=4.5, nuclear_g_factor=0.3))
    assert shifted.qubit_splitting == pytest.approx(plain.qubit_splitting, rel=1e-12)
    assert shifted.cycling_frequency == pytest.approx(plain.cycling_frequency, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.1, max_value=10.0), st.floats(min_value=0.01, max_value=5.0))
def test_splitting_grows_with_field(b1, step):
    low = build_levels(PhysicalConfig(magnetic_field=b1))
    high = build_levels(PhysicalConfig(magnetic_field=b1 + step))
    assert high.qubit_splitting > low.qubit_splitting


def test_detuning_decreases_one_for_one_with_laser_frequency(default_levels):
    omega0 = default_levels.cycling_frequency - 56e9
    a = detuning(default_levels, Qubit.U, Fraction(3, 2), 0, omega0)
    b = detuning(default_levels, Qubit.U, Fraction(3, 2), 0, omega0 + 1e9)
    assert a - b == pytest.approx(1e9, abs=1.0)


def test_detuning_is_none_without_intermediate_state(default_levels):
    assert detuning(default_levels, Qubit.U, Fraction(1, 2), 1, 957e12) is None


def test_cycling_resonance_sits_at_zero(default_levels):
    cycling = [r for r in default_levels.resonances() if r.label == "u->P32_+3/2"]
    assert len(cycling) == 1
    assert cycling[0].detuning == 0.0
    assert cycling[0].polarization == 1


def test_shifted_structure_keeps_transition_frequencies(default_levels):
    moved = default_levels.shifted(3e12)
    assert moved.cycling_frequency == pytest.approx(default_levels.cycling_frequency, abs=1.0)
    assert [r.detuning for r in moved.resonances()] == pytest.approx(
        [r.detuning for r in default_levels.resonances()], abs=1.0
    )
