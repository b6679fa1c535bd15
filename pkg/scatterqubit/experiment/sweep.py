"""
Detuning sweeps of the scattering rates and the theory curves built from them.

Every sweep point carries three estimates of the qubit decoherence rate:
    total_full       = (Gamma_Ram + Gamma_el) / 2        amplitude-difference model
    total_ratediff   = (Gamma_Ram + Gamma_el_diff) / 2   elastic-rate-difference model
    total_raman_only = Gamma_Ram / 2
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from tqdm import tqdm

from scatterqubit.atomic.angular import POLARIZATIONS, linear_polarization
from scatterqubit.atomic.levels import LevelStructure
from scatterqubit.dynamics.density import DensityMatrix
from scatterqubit.dynamics.propagators import propagate
from scatterqubit.dynamics.sequences import PulseSequence, simulate_sequence
from scatterqubit.scattering.amplitudes import path_table
from scatterqubit.scattering.laser import LaserSettings
from scatterqubit.scattering.rates import RateSet, rates_on_grid
from scatterqubit.scattering.stark import StarkComponents, null_or_nearest_end, stark_components_on_grid
from scatterqubit.utils.config import config
from scatterqubit.utils.constants import (
    DEFAULT_SWEEP_POINTS,
    DEFAULT_SWEEP_START,
    DEFAULT_SWEEP_STOP,
    SWEEP_CHUNK_POINTS,
    Qubit,
)
from scatterqubit.utils.exceptions import DomainError
from scatterqubit.utils.logger import logger

RATE_FIELDS = tuple(f.name for f in fields(RateSet))


class EmptySweepError(DomainError):
    """Raised when every point of a sweep was skipped."""


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    detuning_start: float = DEFAULT_SWEEP_START
    detuning_stop: float = DEFAULT_SWEEP_STOP
    n_points: int = Field(default=DEFAULT_SWEEP_POINTS, ge=2)
    grid: Literal["linear"] = "linear"
    laser: Optional[LaserSettings] = None

    @model_validator(mode="after")
    def _distinct_ends(self):
        if self.detuning_start == self.detuning_stop:
            raise ValueError("detuning_start and detuning_stop must differ")
        return self

    def detunings(self) -> np.ndarray:
        """Ascending grid in Hz."""
        lo, hi = sorted((self.detuning_start, self.detuning_stop))
        return np.linspace(lo, hi, self.n_points)


@dataclass(frozen=True)
class SweepRow:
    detuning: float
    gamma_du: float
    gamma_ud: float
    gamma_uu: float
    gamma_dd: float
    gamma_ram: float
    gamma_el: float
    gamma_el_diff: float
    total_full: float
    total_ratediff: float
    total_raman_only: float
    skipped: bool
    polarization_angle: float
    nulled: bool

    @classmethod
    def from_rates(cls, detuning: float, rate_set: RateSet, polarization_angle: float, nulled: bool) -> "SweepRow":
        return cls(
            detuning=detuning,
            **rate_set.as_dict(),
            total_full=rate_set.decoherence_rate,
            total_ratediff=0.5 * (rate_set.gamma_ram + rate_set.gamma_el_diff),
            total_raman_only=0.5 * rate_set.gamma_ram,
            skipped=False,
            polarization_angle=polarization_angle,
            nulled=nulled,
        )

    @classmethod
    def skipped_at(cls, detuning: float) -> "SweepRow":
        nan = math.nan
        return cls(
            detuning, *([nan] * len(RATE_FIELDS)), nan, nan, nan,
            skipped=True, polarization_angle=nan, nulled=False,
        )

    def csv_cells(self) -> list:
        """Cells in sweep CSV column order (detuning in GHz)."""
        return [
            self.detuning / 1e9,
            *(getattr(self, name) for name in ("gamma_ud", "gamma_du", "gamma_uu", "gamma_dd",
                                               "gamma_ram", "gamma_el", "gamma_el_diff")),
            self.total_full,
            self.total_ratediff,
            self.total_raman_only,
            self.skipped,
        ]


def evaluate_grid(levels: LevelStructure, settings: LaserSettings, detunings: Sequence[float]) -> List[SweepRow]:
    """
    Rates at every detuning (Hz from cycling), vectorized over the grid.
    Points within the resonance floor of an allowed intermediate state
    become skipped rows. Each row depends only on its own detuning.
    """
    table = path_table(levels)
    detunings = np.asarray(detunings, dtype=float)
    omega0 = table.cycling_frequency + detunings

    with np.errstate(divide="ignore", invalid="ignore"):
        nearest = np.full_like(omega0, np.inf)
        for path in table.absorption:
            nearest = np.minimum(nearest, np.abs(path.frequency - omega0))
        skipped = nearest < settings.resonance_floor

        angles = np.zeros_like(omega0)
        nulled = np.zeros(omega0.shape, dtype=bool)
        if settings.auto_null:
            stark = stark_components_on_grid(levels, settings.rabi, omega0)
            for n in np.flatnonzero(~skipped):
                components = StarkComponents({lam: float(stark[lam][n]) for lam in POLARIZATIONS})
                angles[n], nulled[n] = null_or_nearest_end(components, float(detunings[n]))
        else:
            angles[:] = math.radians(settings.polarization_angle_deg)

        b = {lam: np.zeros_like(omega0) for lam in POLARIZATIONS}
        for n, theta in enumerate(angles):
            for lam, value in linear_polarization(float(theta)).items():
                b[lam][n] = value
        channels = rates_on_grid(levels, settings.rabi, omega0, b)

    rows: List[SweepRow] = []
    for n, detuning in enumerate(detunings.tolist()):
        if skipped[n]:
            logger.debug(f"Skipping {detuning / 1e9:.3f} GHz: {nearest[n] / 1e6:.3f} MHz from a resonance")
            rows.append(SweepRow.skipped_at(detuning))
            continue
        rate_set = RateSet.from_channels(**{name: float(values[n]) for name, values in channels.items()})
        rows.append(SweepRow.from_rates(detuning, rate_set, float(angles[n]), bool(nulled[n])))
    return rows


def evaluate_point(levels: LevelStructure, settings: LaserSettings, detuning: float) -> SweepRow:
    """Rates at one detuning; an on-resonance point becomes a skipped row."""
    return evaluate_grid(levels, settings, [detuning])[0]


def _evaluate_packed(packed: Tuple[LevelStructure, LaserSettings, np.ndarray]) -> List[SweepRow]:
    return evaluate_grid(*packed)


def sweep(levels: LevelStructure, spec: SweepSpec, max_workers: int = 1) -> List[SweepRow]:
    """
    Rates over the detuning grid, in ascending detuning order. The grid is
    evaluated in chunks; with max_workers > 1 the chunks go to a process
    pool. Rows are identical either way.
    """
    settings = spec.laser or LaserSettings()
    grid = spec.detunings()
    n_chunks = max(4 * max_workers, math.ceil(len(grid) / SWEEP_CHUNK_POINTS))
    work = [(levels, settings, chunk) for chunk in np.array_split(grid, min(n_chunks, len(grid)))]
    show = config.show_progress

    rows: List[SweepRow] = []
    with tqdm(total=len(grid), desc="sweep", disable=not show) as bar:
        if max_workers > 1:
            with ProcessPoolExecutor(max_workers=max_workers) as pool:
                for chunk_rows in pool.map(_evaluate_packed, work):
                    rows.extend(chunk_rows)
                    bar.update(len(chunk_rows))
        else:
            for item in work:
                chunk_rows = _evaluate_packed(item)
                rows.extend(chunk_rows)
                bar.update(len(chunk_rows))

    n_skipped = sum(row.skipped for row in rows)
    if n_skipped == len(rows):
        raise EmptySweepError(f"All {len(rows)} sweep points lie within the resonance floor")
    if n_skipped:
        logger.warning(f"Skipped {n_skipped} on-resonance sweep point(s)")
    if settings.auto_null:
        no_null = sum(1 for row in rows if not row.skipped and not row.nulled)
        if no_null:
            logger.warning(
                f"No light-shift null at {no_null} sweep point(s); "
                f"used the endpoint angle with the smaller shift there"
            )
    logger.success(f"Sweep finished: {len(rows) - n_skipped} of {len(rows)} point(s) evaluated")
    return rows


def find_crossings(
    rows: Sequence[SweepRow],
    lo: Optional[float] = None,
    hi: Optional[float] = None,
) -> List[float]:
    """Detunings (Hz) where Gamma_uu - Gamma_dd changes sign, linearly interpolated."""
    usable = [
        row for row in rows
        if not row.skipped
        and (lo is None or row.detuning >= lo)
        and (hi is None or row.detuning <= hi)
    ]
    crossings: List[float] = []
    for left, right in zip(usable, usable[1:]):
        f_left = left.gamma_uu - left.gamma_dd
        f_right = right.gamma_uu - right.gamma_dd
        if f_left == 0.0:
            crossings.append(left.detuning)
        elif f_left * f_right < 0.0:
            fraction = f_left / (f_left - f_right)
            crossings.append(left.detuning + fraction * (right.detuning - left.detuning))
    if usable and usable[-1].gamma_uu == usable[-1].gamma_dd:
        crossings.append(usable[-1].detuning)
    return crossings


def resonance_window(levels: LevelStructure) -> Tuple[float, float]:
    """
    Detunings (Hz from cycling) of u -> |3/2, +1/2> and d -> |3/2, -1/2>,
    in ascending order. The elastic-rate crossing lies between them.
    """
    wanted = {(Qubit.U, Fraction(1, 2)), (Qubit.D, Fraction(-1, 2))}
    found = [
        r.detuning for r in levels.resonances()
        if r.excited.J == Fraction(3, 2) and (r.qubit, r.excited.MJ) in wanted
    ]
    lo, hi = sorted(found)
    return lo, hi


def raman_population_curve(rate_set: RateSet, initial: Qubit, times: Sequence[float]) -> np.ndarray:
    """rho_uu(t) for a qubit prepared in `initial` under light only."""
    rho0 = DensityMatrix.basis(initial)
    return np.array([propagate(rho0, rate_set, float(t)).rho_uu for t in times])


def spin_echo_curve(rate_set: RateSet, taus: Sequence[float]) -> np.ndarray:
    """Final rho_uu of the spin echo started in |u> at each total light time."""
    rho0 = DensityMatrix.basis(Qubit.U)
    return np.array([
        simulate_sequence(rho0, PulseSequence.spin_echo(float(tau)), rate_set).rho_uu
        for tau in taus
    ])
