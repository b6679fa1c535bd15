import pytest

from scatterqubit.atomic.levels import LevelStructure, PhysicalConfig, build_levels
from scatterqubit.experiment.sweep import SweepSpec, sweep

from .helpers import symmetric_overrides


@pytest.fixture(scope="session")
def default_levels() -> LevelStructure:
    return build_levels(PhysicalConfig())


@pytest.fixture(scope="session")
def generic_levels() -> LevelStructure:
    """Small field, no hyperfine term, large fine structure: a generic two-level qubit."""
    return build_levels(PhysicalConfig(magnetic_field=0.05, hyperfine_a_s12=0.0, fine_structure_split=100e12))


@pytest.fixture(scope="session")
def clock_levels() -> LevelStructure:
    """Excited states degenerate; only the ground splitting distinguishes u from d."""
    return build_levels(PhysicalConfig(
        magnetic_field=1e-9,
        hyperfine_a_s12=0.0,
        fine_structure_split=100e12,
        level_overrides={"S12_+1/2": 0.625e9, "S12_-1/2": -0.625e9},
    ))


@pytest.fixture(scope="session")
def symmetric_levels() -> LevelStructure:
    return build_levels(PhysicalConfig(level_overrides=symmetric_overrides()))


@pytest.fixture(scope="session")
def default_sweep_rows(default_levels):
    return sweep(default_levels, SweepSpec())
