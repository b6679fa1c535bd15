from scatterqubit.dynamics.density import DensityMatrix, InvalidStateError
from scatterqubit.dynamics.propagators import StepSizeError, apply_rotation, propagate, rk4_propagate
from scatterqubit.dynamics.sequences import (
    PulseSequence,
    Rotate,
    Wait,
    simulate_sequence,
    ramsey_analytic,
    spin_echo_analytic,
)
from scatterqubit.dynamics.trajectories import (
    TrajectoryConfig,
    TrajectoryResult,
    run_trajectories,
    trajectory_amplitudes,
)

__all__ = [
    "DensityMatrix",
    "InvalidStateError",
    "PulseSequence",
    "Rotate",
    "StepSizeError",
    "TrajectoryConfig",
    "TrajectoryResult",
    "Wait",
    "apply_rotation",
    "propagate",
    "rk4_propagate",
    "run_trajectories",
    "simulate_sequence",
    "ramsey_analytic",
    "spin_echo_analytic",
    "trajectory_amplitudes",
]
