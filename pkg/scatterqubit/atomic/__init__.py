from scatterqubit.atomic.angular import dipole_ratio, line_strength, linear_polarization
from scatterqubit.atomic.levels import (
    LevelStructure,
    LevelStructureError,
    PhysicalConfig,
    Resonance,
    ZeemanLevel,
    build_levels,
    detuning,
    solve_magnetic_field,
)

__all__ = [
    "LevelStructure",
    "LevelStructureError",
    "PhysicalConfig",
    "Resonance",
    "ZeemanLevel",
    "build_levels",
    "detuning",
    "dipole_ratio",
    "line_strength",
    "linear_polarization",
    "solve_magnetic_field",
]
