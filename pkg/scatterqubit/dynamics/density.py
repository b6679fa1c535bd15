"""
Reduced 2x2 density matrix of the qubit in the basis (u, d).
"""

import math
from dataclasses import dataclass

import numpy as np

from scatterqubit.utils.constants import Qubit
from scatterqubit.utils.exceptions import DomainError

STATE_TOLERANCE = 1e-9


class InvalidStateError(DomainError):
    """Raised for non-physical density matrices, non-pure trajectory inputs or negative durations."""


@dataclass(frozen=True)
class DensityMatrix:
    rho_uu: float
    rho_dd: float
    rho_ud: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "rho_uu", float(self.rho_uu))
        object.__setattr__(self, "rho_dd", float(self.rho_dd))
        object.__setattr__(self, "rho_ud", complex(self.rho_ud))
        if not all(math.isfinite(v) for v in (self.rho_uu, self.rho_dd, self.rho_ud.real, self.rho_ud.imag)):
            raise InvalidStateError(f"Density matrix has non-finite entries: {self}")
        if abs(self.trace - 1.0) > STATE_TOLERANCE:
            raise InvalidStateError(f"Density matrix trace must be 1, got {self.trace!r}")
        if min(self.rho_uu, self.rho_dd) < -STATE_TOLERANCE:
            raise InvalidStateError(f"Populations must be non-negative: {self}")
        if abs(self.rho_ud) ** 2 > self.rho_uu * self.rho_dd + STATE_TOLERANCE:
            raise InvalidStateError(f"Density matrix is not positive semidefinite: {self}")

    # === Constructors ===

    @classmethod
    def basis(cls, qubit: Qubit) -> "DensityMatrix":
        return cls(1.0, 0.0) if Qubit(qubit) is Qubit.U else cls(0.0, 1.0)

    @classmethod
    def from_state(cls, c_u: complex, c_d: complex) -> "DensityMatrix":
        """Pure state c_u|u> + c_d|d>; the amplitudes are normalized first."""
        norm = abs(c_u) ** 2 + abs(c_d) ** 2
        if norm == 0.0:
            raise InvalidStateError("State vector must be non-zero")
        c_u, c_d = c_u / math.sqrt(norm), c_d / math.sqrt(norm)
        return cls(abs(c_u) ** 2, abs(c_d) ** 2, c_u * np.conj(c_d))

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "DensityMatrix":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidStateError(f"Expected a 2x2 matrix, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=STATE_TOLERANCE):
            raise InvalidStateError("Density matrix must be Hermitian")
        return cls(m[0, 0].real, m[1, 1].real, m[0, 1])

    # === Views ===

    def as_matrix(self) -> np.ndarray:
        return np.array(
            [[self.rho_uu, self.rho_ud], [np.conj(self.rho_ud), self.rho_dd]],
            dtype=complex,
        )

    @property
    def rho_du(self) -> complex:
        return self.rho_ud.conjugate()

    @property
    def trace(self) -> float:
        return self.rho_uu + self.rho_dd

    @property
    def purity(self) -> float:
        return self.rho_uu ** 2 + self.rho_dd ** 2 + 2.0 * abs(self.rho_ud) ** 2

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.as_matrix())

    def bloch_vector(self) -> np.ndarray:
        """(x, y, z) with rho = (I + x sx + y sy + z sz) / 2."""
        return np.array([2.0 * self.rho_ud.real, -2.0 * self.rho_ud.imag, self.rho_uu - self.rho_dd])

    def is_pure(self, tolerance: float = STATE_TOLERANCE) -> bool:
        return abs(self.purity - 1.0) <= tolerance

    def state_vector(self) -> tuple[complex, complex]:
        """(c_u, c_d) of a pure state, with c_u real and non-negative."""
        if not self.is_pure():
            raise InvalidStateError(f"State is mixed (purity {self.purity:.12g}); a pure state is required")
        c_u = math.sqrt(max(self.rho_uu, 0.0))
        if c_u > STATE_TOLERANCE:
            return complex(c_u), self.rho_ud.conjugate() / c_u
        return 0j, complex(math.sqrt(max(self.rho_dd, 0.0)))
