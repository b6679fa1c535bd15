"""
Strong-field (Paschen-Back) level structure of an alkali-like ion.

All energies are plain frequencies in Hz measured from the S1/2 centroid.
The nuclear spin projection mI is a spectator that is the same for every
level; it only enters through the hyperfine term A * MJ * mI and the optional
common nuclear Zeeman term.
"""

import re
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.optimize import brentq

from scatterqubit.atomic.angular import EXCITED_J, POLARIZATIONS, dipole_ratio
from scatterqubit.utils.constants import (
    BOHR_MAGNETON_HZ_PER_T,
    DEFAULT_FINE_STRUCTURE_SPLIT,
    DEFAULT_GAMMA,
    DEFAULT_GJ_P12,
    DEFAULT_GJ_P32,
    DEFAULT_GJ_S12,
    DEFAULT_HYPERFINE_A_S12,
    DEFAULT_NUCLEAR_MI,
    DEFAULT_OPTICAL_FREQUENCY,
    DEFAULT_QUBIT_SPLITTING,
    NUCLEAR_MAGNETON_HZ_PER_T,
    Qubit,
    Term,
)
from scatterqubit.utils.exceptions import DomainError
from scatterqubit.utils.logger import logger

_LABEL_PATTERN = re.compile(r"^(S12|P12|P32)_([+-]?\d+)/2$")
_MAX_FIELD_T = 1e4


class LevelStructureError(DomainError):
    """Raised for bad level overrides, non-positive qubit splitting or failed calibration."""


def format_label(term: Term, MJ: Fraction) -> str:
    """`P32_+1/2` style label."""
    sign = "+" if MJ > 0 else "-"
    return f"{term.value}_{sign}{abs(MJ.numerator)}/2"


def parse_label(label: str) -> Tuple[Term, Fraction]:
    match = _LABEL_PATTERN.match(label.strip())
    if match is None:
        raise LevelStructureError(f"Unrecognised level label '{label}' (expected e.g. 'P32_+1/2')")
    term = Term(match.group(1))
    MJ = Fraction(int(match.group(2)), 2)
    if MJ.denominator != 2 or abs(MJ) > term.J:
        raise LevelStructureError(f"Level '{label}' does not exist: |MJ| must be a half-integer <= {term.J}")
    return term, MJ


class PhysicalConfig(BaseModel):
    """
    Atomic constants and field of a run. Either `magnetic_field` is given or B
    is calibrated so that the qubit splitting equals `qubit_splitting`.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    magnetic_field: Optional[float] = Field(default=None, gt=0)
    qubit_splitting: Optional[float] = Field(default=DEFAULT_QUBIT_SPLITTING, gt=0)
    gj_s12: float = DEFAULT_GJ_S12
    gj_p12: float = DEFAULT_GJ_P12
    gj_p32: float = DEFAULT_GJ_P32
    fine_structure_split: float = DEFAULT_FINE_STRUCTURE_SPLIT
    hyperfine_a_s12: float = DEFAULT_HYPERFINE_A_S12
    hyperfine_a_p12: float = 0.0
    hyperfine_a_p32: float = 0.0
    nuclear_mi: float = DEFAULT_NUCLEAR_MI
    nuclear_g_factor: Optional[float] = None
    optical_frequency: float = Field(default=DEFAULT_OPTICAL_FREQUENCY, gt=0)
    gamma: float = Field(default=DEFAULT_GAMMA, gt=0)
    level_overrides: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="before")
    @classmethod
    def _field_replaces_calibration(cls, data):
        if isinstance(data, dict) and data.get("magnetic_field") is not None and "qubit_splitting" not in data:
            data = {**data, "qubit_splitting": None}
        return data

    @model_validator(mode="after")
    def _exactly_one_field_source(self):
        if (self.magnetic_field is None) == (self.qubit_splitting is None):
            raise ValueError("exactly one of 'magnetic_field' and 'qubit_splitting' must be set")
        return self

    @field_validator("nuclear_mi")
    @classmethod
    def _half_integer_mi(cls, value: float) -> float:
        if abs(2 * value - round(2 * value)) > 1e-12:
            raise ValueError("nuclear_mi must be an integer or half-integer")
        return value

    @field_validator("level_overrides")
    @classmethod
    def _known_labels(cls, overrides: Dict[str, float]) -> Dict[str, float]:
        for label in overrides:
            try:
                parse_label(label)
            except LevelStructureError as e:
                raise ValueError(str(e))
        return overrides


@dataclass(frozen=True)
class ZeemanLevel:
    term: Term
    J: Fraction
    MJ: Fraction
    mI: Fraction
    energy: float
    label: str


@dataclass(frozen=True)
class Resonance:
    """An allowed ground -> excited transition; `detuning` is relative to the cycling line."""
    qubit: Qubit
    excited: ZeemanLevel
    polarization: int
    frequency: float
    detuning: float

    @property
    def label(self) -> str:
        return f"{self.qubit.value}->{self.excited.label}"


@dataclass(frozen=True)
class LevelStructure:
    """
    The two qubit sublevels of S1/2 and the six excited sublevels of P1/2 and
    P3/2. Each (J, MJ) appears exactly once among `excited`.
    """

    qubit_u: ZeemanLevel
    qubit_d: ZeemanLevel
    excited: Tuple[ZeemanLevel, ...]
    gamma: float
    magnetic_field: float

    def __post_init__(self):
        keys = [(lvl.J, lvl.MJ) for lvl in self.excited]
        if len(set(keys)) != len(keys) or len(keys) != 6:
            raise LevelStructureError(f"Excited manifold must hold each (J, MJ) exactly once, got {keys}")
        if self.qubit_splitting <= 0:
            raise LevelStructureError(
                f"Qubit splitting must be positive (u above d), got {self.qubit_splitting:.6g} Hz"
            )

    def ground(self, qubit: Qubit) -> ZeemanLevel:
        return self.qubit_u if Qubit(qubit) is Qubit.U else self.qubit_d

    def excited_level(self, J: Fraction, MJ: Fraction) -> Optional[ZeemanLevel]:
        for level in self.excited:
            if level.J == J and level.MJ == MJ:
                return level
        return None

    @property
    def levels(self) -> Tuple[ZeemanLevel, ...]:
        return (self.qubit_u, self.qubit_d) + self.excited

    @property
    def qubit_splitting(self) -> float:
        return self.qubit_u.energy - self.qubit_d.energy

    @property
    def cycling_frequency(self) -> float:
        """Frequency of |S1/2, +1/2> -> |P3/2, +3/2>."""
        top = self.excited_level(Fraction(3, 2), Fraction(3, 2))
        return top.energy - self.qubit_u.energy

    def resonances(self) -> List[Resonance]:
        found = []
        for qubit in Qubit:
            ground = self.ground(qubit)
            for level in self.excited:
                lam = level.MJ - ground.MJ
                if lam not in POLARIZATIONS or dipole_ratio(ground.MJ, level.J, level.MJ, int(lam)) == 0.0:
                    continue
                frequency = level.energy - ground.energy
                found.append(Resonance(
                    qubit=qubit,
                    excited=level,
                    polarization=int(lam),
                    frequency=frequency,
                    detuning=frequency - self.cycling_frequency,
                ))
        return sorted(found, key=lambda r: r.detuning)

    def shifted(self, offset: float) -> "LevelStructure":
        """Same structure with every energy moved by `offset` Hz."""
        def move(level: ZeemanLevel) -> ZeemanLevel:
            return replace(level, energy=level.energy + offset)

        return replace(
            self,
            qubit_u=move(self.qubit_u),
            qubit_d=move(self.qubit_d),
            excited=tuple(move(level) for level in self.excited),
        )


def _zeeman_energy(cfg: PhysicalConfig, term: Term, MJ: Fraction, B: float) -> float:
    gj = {Term.S12: cfg.gj_s12, Term.P12: cfg.gj_p12, Term.P32: cfg.gj_p32}[term]
    a = {Term.S12: cfg.hyperfine_a_s12, Term.P12: cfg.hyperfine_a_p12, Term.P32: cfg.hyperfine_a_p32}[term]
    offset = {
        Term.S12: 0.0,
        Term.P12: cfg.optical_frequency,
        Term.P32: cfg.optical_frequency + cfg.fine_structure_split,
    }[term]
    energy = offset + gj * BOHR_MAGNETON_HZ_PER_T * B * float(MJ) + a * float(MJ) * cfg.nuclear_mi
    if cfg.nuclear_g_factor is not None:
        energy -= cfg.nuclear_g_factor * NUCLEAR_MAGNETON_HZ_PER_T * B * cfg.nuclear_mi
    return energy


def _splitting_at(cfg: PhysicalConfig, B: float) -> float:
    return _zeeman_energy(cfg, Term.S12, Fraction(1, 2), B) - _zeeman_energy(cfg, Term.S12, Fraction(-1, 2), B)


def solve_magnetic_field(cfg: PhysicalConfig, target_splitting: float) -> float:
    """
    Field (T) at which the unperturbed qubit splitting equals `target_splitting`
    (Hz). With the default constants 124.1 GHz needs about 4.46 T.
    """
    if target_splitting <= 0:
        raise LevelStructureError(f"Target splitting must be positive, got {target_splitting}")

    def residual(B: float) -> float:
        return _splitting_at(cfg, B) - target_splitting

    lo, hi = 0.0, 1.0
    while residual(hi) < 0 and hi < _MAX_FIELD_T:
        hi *= 2.0
    if residual(lo) * residual(hi) > 0:
        raise LevelStructureError(
            f"Cannot reach a qubit splitting of {target_splitting:.6g} Hz for 0 < B <= {hi:g} T"
        )
    B = brentq(residual, lo, hi, xtol=1e-15, rtol=1e-14)
    logger.debug(f"Calibrated magnetic field {B:.6f} T for splitting {target_splitting / 1e9:.3f} GHz")
    return B


def build_levels(cfg: PhysicalConfig) -> LevelStructure:
    """
    Builds the eight Zeeman sublevels. Overrides (label -> Hz) replace the
    computed energy verbatim, after field calibration.

    Args:
        cfg (PhysicalConfig): Atomic constants, field or target splitting, overrides.

    Returns:
        LevelStructure: Qubit levels and the six excited sublevels.

    Raises:
        LevelStructureError: If an override label is malformed, the field
            calibration fails or the qubit splitting is not positive.
    """
    B = cfg.magnetic_field if cfg.magnetic_field is not None else solve_magnetic_field(cfg, cfg.qubit_splitting)
    overrides = {}
    for label, energy in cfg.level_overrides.items():
        term, MJ = parse_label(label)
        overrides[(term, MJ)] = float(energy)

    mI = Fraction(cfg.nuclear_mi).limit_denominator(2)

    def make(term: Term, MJ: Fraction) -> ZeemanLevel:
        energy = overrides.get((term, MJ), _zeeman_energy(cfg, term, MJ, B))
        return ZeemanLevel(term=term, J=term.J, MJ=MJ, mI=mI, energy=energy, label=format_label(term, MJ))

    excited = []
    for J in EXCITED_J:
        term = Term.excited_for(J)
        MJ = -J
        while MJ <= J:
            excited.append(make(term, MJ))
            MJ += 1

    structure = LevelStructure(
        qubit_u=make(Term.S12, Qubit.U.mj),
        qubit_d=make(Term.S12, Qubit.D.mj),
        excited=tuple(excited),
        gamma=cfg.gamma,
        magnetic_field=B,
    )
    if overrides:
        logger.info(f"Applied {len(overrides)} level override(s)")
    return structure


def detuning(levels: LevelStructure, i: Qubit, J: Fraction, lam: int, omega0: float) -> Optional[float]:
    """
    Detuning (Hz) of the laser at absolute frequency `omega0` from the
    |J, m_i + lam> intermediate state reached from qubit level `i`:

        delta = E(J, m_i + lam) - E(i) - omega0

    Returns None when that intermediate state does not exist.
    """
    ground = levels.ground(i)
    level = levels.excited_level(Fraction(J), ground.MJ + lam)
    if level is None:
        return None
    return level.energy - ground.energy - omega0
