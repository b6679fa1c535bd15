"""
JSON run configuration: every physical and numerical input of a command.

A run configuration is loaded from a file (or the packaged default), patched
with `--set a.b.c=value` overrides, and validated as a whole. Unknown keys
are rejected with their dotted path.
"""

import copy
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from scatterqubit.atomic.levels import PhysicalConfig
from scatterqubit.dynamics.sequences import PulseSequence, Rotate, Wait
from scatterqubit.dynamics.trajectories import TrajectoryConfig
from scatterqubit.experiment.sweep import SweepSpec
from scatterqubit.scattering.laser import LaserSettings
from scatterqubit.utils.constants import DEFAULT_RUN_CONFIG_PATH, SequenceKind
from scatterqubit.utils.exceptions import ConfigError
from scatterqubit.utils.file_loader import load_json_config
from scatterqubit.utils.output_writer import compute_config_hash


class RotateStep(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    type: Literal["rotate"] = "rotate"
    theta_deg: float
    phase_deg: float = 0.0


class WaitStep(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    type: Literal["wait"] = "wait"
    duration: float = Field(ge=0)
    light: bool = True


class SequenceSettings(BaseModel):
    """Pulse sequence of the `sequence` command; times in seconds, angles in degrees."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: SequenceKind = SequenceKind.SPIN_ECHO
    tau: float = Field(default=0.01, ge=0)
    phase_deg: float = 0.0
    integrator: Literal["exact", "rk4"] = "exact"
    steps: List[Union[RotateStep, WaitStep]] = Field(default_factory=list)
    taus: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _custom_needs_steps(self):
        if self.kind is SequenceKind.CUSTOM and not self.steps:
            raise ValueError("a custom sequence needs at least one entry in 'steps'")
        if any(t < 0 for t in self.taus):
            raise ValueError("taus must be non-negative")
        return self

    def build(self, tau: Optional[float] = None) -> PulseSequence:
        tau = self.tau if tau is None else tau
        if self.kind is SequenceKind.SPIN_ECHO:
            return PulseSequence.spin_echo(tau)
        if self.kind is SequenceKind.RAMSEY:
            return PulseSequence.ramsey(tau, math.radians(self.phase_deg))
        if self.kind is SequenceKind.RAMAN_FROM_D:
            return PulseSequence.raman_decay(tau, "d")
        if self.kind is SequenceKind.RAMAN_FROM_U:
            return PulseSequence.raman_decay(tau, "u")
        segments = tuple(
            Rotate(math.radians(step.theta_deg), math.radians(step.phase_deg))
            if isinstance(step, RotateStep) else Wait(step.duration, step.light)
            for step in self.steps
        )
        return PulseSequence(segments=segments, name="custom")


class StarkSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    angle_step_deg: float = Field(default=1.0, gt=0, le=90)


class OutputSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    svg: bool = False


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    physical: PhysicalConfig = Field(default_factory=PhysicalConfig)
    laser: LaserSettings = Field(default_factory=LaserSettings)
    sweep: SweepSpec = Field(default_factory=SweepSpec)
    sequence: SequenceSettings = Field(default_factory=SequenceSettings)
    trajectories: TrajectoryConfig = Field(default_factory=TrajectoryConfig)
    stark: StarkSettings = Field(default_factory=StarkSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)

    @property
    def seed(self) -> int:
        return self.trajectories.seed

    @property
    def config_hash(self) -> str:
        return compute_config_hash(self.model_dump(mode="json"))

    def sweep_spec(self) -> SweepSpec:
        """Sweep spec with the top-level laser filled in when the sweep has none."""
        if self.sweep.laser is not None:
            return self.sweep
        return self.sweep.model_copy(update={"laser": self.laser})


def _parse_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def apply_override(document: Dict[str, Any], assignment: str) -> None:
    """Applies one `a.b.c=value` assignment in place; value is JSON or a bare string."""
    if "=" not in assignment:
        raise ConfigError(f"Override '{assignment}' must look like key.path=value")
    path, raw = assignment.split("=", 1)
    keys = [k.strip() for k in path.split(".")]
    if not all(keys):
        raise ConfigError(f"Override '{assignment}' has an empty key")
    node = document
    for depth, key in enumerate(keys[:-1]):
        child = node.setdefault(key, {})
        if not isinstance(child, dict):
            raise ConfigError(f"Cannot set '{path}': '{'.'.join(keys[:depth + 1])}' is not a section")
        node = child
    node[keys[-1]] = _parse_value(raw)


def _describe(error: ValidationError) -> str:
    lines = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "<root>"
        lines.append(f"{location}: {item['msg']}")
    return "; ".join(lines)


def validate_run_config(document: Dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigError(f"Invalid run configuration: {_describe(e)}")


def load_run_config(
    path: Optional[str | Path] = None,
    overrides: Sequence[str] = (),
    seed: Optional[int] = None,
) -> RunConfig:
    """
    Loads, patches and validates a run configuration. Without `path` the
    packaged default is used. `seed` replaces trajectories.seed.
    """
    document = load_json_config(path if path is not None else DEFAULT_RUN_CONFIG_PATH)
    document = copy.deepcopy(document)
    for assignment in overrides:
        apply_override(document, assignment)
    if seed is not None:
        document.setdefault("trajectories", {})
        if not isinstance(document["trajectories"], dict):
            raise ConfigError("'trajectories' must be a section")
        document["trajectories"]["seed"] = seed
    return validate_run_config(document)
