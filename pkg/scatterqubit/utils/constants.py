"""
Centralized constants and enums for scatterqubit.

Includes:
- Atomic term and qubit-state labels
- Fit methods, curve kinds and pulse-sequence kinds
- Logging levels and CLI exit codes
- Physical constants (frequency units) and default Be+ atomic data
- Directory paths and output formats
"""

from enum import Enum, IntEnum
from fractions import Fraction
from pathlib import Path
from typing import Final

from scipy.constants import physical_constants


# === Atomic Structure Labels ===

class Term(str, Enum):
    """Fine-structure terms carried by the level structure."""
    S12 = "S12"
    P12 = "P12"
    P32 = "P32"

    @property
    def J(self) -> Fraction:
        return Fraction(3, 2) if self is Term.P32 else Fraction(1, 2)

    @classmethod
    def excited_for(cls, J: Fraction) -> "Term":
        """Returns the P term with total angular momentum J."""
        return cls.P32 if J == Fraction(3, 2) else cls.P12


class Qubit(str, Enum):
    """Qubit states: u = S1/2 MJ=+1/2, d = S1/2 MJ=-1/2."""
    U = "u"
    D = "d"

    @property
    def mj(self) -> Fraction:
        return Fraction(1, 2) if self is Qubit.U else Fraction(-1, 2)

    @property
    def other(self) -> "Qubit":
        return Qubit.D if self is Qubit.U else Qubit.U


# === Analysis Enums ===

class FitMethod(str, Enum):
    """Supported decay-fit methods."""
    EARLY_SLOPE = "early-slope"
    FULL_EXPONENTIAL = "full-exponential"

    @classmethod
    def values(cls) -> list[str]:
        return [member.value for member in cls]


class CurveKind(str, Enum):
    """Population curves the fitter understands."""
    FROM_D = "from_d"          # prepared in |d>, |u> population grows at Gamma_du
    FROM_U = "from_u"          # prepared in |u>, |u> population decays at Gamma_ud
    SPIN_ECHO = "spin_echo"    # |u> population at the end of the echo

    @classmethod
    def values(cls) -> list[str]:
        return [member.value for member in cls]


class SequenceKind(str, Enum):
    """Pulse-sequence presets accepted by the run configuration."""
    SPIN_ECHO = "spin_echo"
    RAMSEY = "ramsey"
    RAMAN_FROM_D = "raman_from_d"
    RAMAN_FROM_U = "raman_from_u"
    CUSTOM = "custom"


class PlotTemplateKey(str, Enum):
    """Keys of the SVG templates in cli/plot_templates.yaml."""
    LINE_CHART = "line_chart"
    SERIES = "series"


# === Custom Logging Levels ===
class LogLevel(IntEnum):
    """Logging levels including custom SUCCESS level (25)."""
    DEBUG = 10
    INFO = 20
    SUCCESS = 25
    WARNING = 30
    ERROR = 40
    CRITICAL = 50


class ExitCode(IntEnum):
    """Process exit codes of the command-line front end."""
    OK = 0
    CONFIG_ERROR = 2
    IO_ERROR = 3
    DOMAIN_ERROR = 4


# === Physical Constants (frequency units, h absorbed) ===

BOHR_MAGNETON_HZ_PER_T: Final[float] = physical_constants["Bohr magneton in Hz/T"][0]
NUCLEAR_MAGNETON_HZ_PER_T: Final[float] = physical_constants["nuclear magneton in MHz/T"][0] * 1e6

# === Default Atomic Data (9Be+) ===

DEFAULT_GJ_S12: Final[float] = 2.00226
DEFAULT_GJ_P12: Final[float] = 2.0 / 3.0
DEFAULT_GJ_P32: Final[float] = 4.0 / 3.0
DEFAULT_HYPERFINE_A_S12: Final[float] = -625.009e6
DEFAULT_FINE_STRUCTURE_SPLIT: Final[float] = 197.2e9
DEFAULT_OPTICAL_FREQUENCY: Final[float] = 957.398e12     # 2s S1/2 -> 2p P1/2 centroid
DEFAULT_GAMMA: Final[float] = 1.22e8
DEFAULT_NUCLEAR_MI: Final[float] = 1.5
DEFAULT_QUBIT_SPLITTING: Final[float] = 124.1e9

# === Scattering / Sweep Defaults ===

DEFAULT_RESONANCE_FLOOR_HZ: Final[float] = 10e6
DEFAULT_RABI: Final[float] = 125663706.14359172     # 2 pi x 20 MHz
DEFAULT_SWEEP_START: Final[float] = -95e9
DEFAULT_SWEEP_STOP: Final[float] = -30e9
DEFAULT_SWEEP_POINTS: Final[int] = 651
SWEEP_CHUNK_POINTS: Final[int] = 128
AUTO_NULL: Final[str] = "auto-null"
NULL_ANGLE_XTOL: Final[float] = 1e-10

# === Dynamics Defaults ===

RK4_MAX_STEP_FRACTION: Final[float] = 0.1
TRAJECTORY_MAX_STEP_FRACTION: Final[float] = 0.05
TRAJECTORY_DEFAULT_STEP_FRACTION: Final[float] = 0.01
TRAJECTORY_BATCH_SIZE: Final[int] = 500
TRAJECTORY_STREAM_BLOCK: Final[int] = 500

# === Fitting Defaults ===

EARLY_WINDOW_FACTOR: Final[float] = 0.2
EARLY_WINDOW_REFINEMENTS: Final[int] = 2
GAUSS_NEWTON_MAX_ITER: Final[int] = 100
GAUSS_NEWTON_RTOL: Final[float] = 1e-10
POPULATION_TOLERANCE: Final[float] = 0.05

# === Scaling Fit ===

SCALING_DECADE_FACTOR: Final[float] = 10.0

# === Paths ===

PACKAGE_DIR = Path(__file__).resolve().parent.parent
CONFIG_DIR = PACKAGE_DIR / "config"
APP_SETTINGS_PATH = CONFIG_DIR / "config.yaml"
DEFAULT_RUN_CONFIG_PATH = CONFIG_DIR / "default_run.json"
PLOT_TEMPLATE_PATH = PACKAGE_DIR / "cli" / "plot_templates.yaml"
OUTPUT_DIR = Path("output")

# === Output Formats ===

CSV_FLOAT_FORMAT: Final[str] = ".9g"
CONFIG_HASH_LENGTH: Final[int] = 16
SWEEP_CSV_COLUMNS: Final[tuple[str, ...]] = (
    "detuning_ghz",
    "gamma_ud",
    "gamma_du",
    "gamma_uu",
    "gamma_dd",
    "gamma_ram",
    "gamma_el",
    "gamma_el_diff",
    "total_full",
    "total_ratediff",
    "total_raman_only",
    "skipped",
)
STARK_CSV_COLUMNS: Final[tuple[str, ...]] = ("angle_deg", "shift_hz")
