"""Exact time evolution through dense eigendecomposition.

Basis dimensions stay in the low hundreds for truncated bases (a few
thousand for full-basis cross-checks), so a single eigh per realisation
plus a phase matrix is both exact and fast; there is nothing to gain
from integrators at this size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DomainError, NoExactRevivalError, NumericalError
from .hamiltonian import CouplingProfile
from .hilbert import Basis, StateVector

_HERMITICITY_TOL = 1e-12
_SPACING_RTOL = 1e-8


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of one Hamiltonian.

    ``eigenvalues`` ascend; ``eigenvectors[:, k]`` belongs to
    ``eigenvalues[k]``.
    """

    basis: Basis
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class TimeGrid:
    """Sampling times plus the revival time used to express them.

    ``fractions`` gives the times in units of the revival time, which
    is what the CSV outputs and plots use.
    """

    system_time: float
    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (np.isfinite(self.system_time) and self.system_time > 0.0):
            raise DomainError(f"system_time must be positive, got {self.system_time}")
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 1 or pts.size == 0:
            raise DomainError("time grid needs at least one point")
        if not np.all(np.isfinite(pts)) or pts[0] < 0.0:
            raise DomainError("grid times must be finite and non-negative")
        if pts.size > 1 and np.any(np.diff(pts) <= 0.0):
            raise DomainError("grid times must be strictly increasing")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, system_time: float, n_points: int = 801,
                span_in_ts: float = 4.0) -> "TimeGrid":
        """Evenly spaced grid over [0, span_in_ts * system_time]."""
        if n_points < 2:
            raise DomainError(f"uniform grid needs at least 2 points, got {n_points}")
        if not span_in_ts > 0.0:
            raise DomainError(f"span_in_ts must be positive, got {span_in_ts}")
        return cls(system_time,
                   np.linspace(0.0, span_in_ts * system_time, n_points))

    @classmethod
    def from_fractions(cls, system_time: float, fractions) -> "TimeGrid":
        """Grid at explicit multiples of the revival time."""
        return cls(system_time,
                   np.asarray(fractions, dtype=np.float64) * system_time)

    @property
    def fractions(self) -> np.ndarray:
        return self.points / self.system_time

    def __len__(self) -> int:
        return self.points.size


def eigendecompose(h: np.ndarray, basis: Basis) -> Spectrum:
    """Diagonalise a Hermitian Hamiltonian."""
    h = np.asarray(h)
    if h.shape != (basis.dimension, basis.dimension):
        raise DomainError(
            f"Hamiltonian shape {h.shape} does not match basis dimension "
            f"{basis.dimension}")
    asymmetry = np.abs(h - h.conj().T).max()
    if asymmetry > _HERMITICITY_TOL:
        raise NumericalError(
            f"Hamiltonian is not Hermitian: max asymmetry {asymmetry:.3e}")
    eigenvalues, eigenvectors = np.linalg.eigh(h)
    return Spectrum(basis, eigenvalues, eigenvectors)


def evolve(spectrum: Spectrum, psi: StateVector, t: float) -> StateVector:
    """Propagate a state to time t >= 0."""
    if psi.basis != spectrum.basis:
        raise DomainError("state vector belongs to a different basis")
    if not (np.isfinite(t) and t >= 0.0):
        raise DomainError(f"time must be finite and non-negative, got {t}")
    modes = spectrum.eigenvectors.conj().T @ psi.amplitudes
    modes *= np.exp(-1j * spectrum.eigenvalues * t)
    return StateVector(spectrum.basis, spectrum.eigenvectors @ modes)


def sample_trajectory(spectrum: Spectrum, psi: StateVector,
                      grid: TimeGrid) -> np.ndarray:
    """Amplitudes at every grid time, shape (len(grid), dimension).

    Row t is the state vector at ``grid.points[t]`` in the basis the
    spectrum was computed in.
    """
    if psi.basis != spectrum.basis:
        raise DomainError("state vector belongs to a different basis")
    modes = spectrum.eigenvectors.conj().T @ psi.amplitudes
    phases = np.exp(-1j * np.outer(grid.points, spectrum.eigenvalues))
    return (phases * modes) @ spectrum.eigenvectors.T


def system_time(profile: CouplingProfile) -> float:
    """Time of the first exact revival, 2*pi over the spectral spacing.

    Requires the single-excitation spectrum to be an equally spaced
    ladder, which the perfect-transfer profile satisfies by
    construction (spacing 2 * j0, so the revival is at pi / j0).
    """
    if profile.label == "pst":
        return np.pi / profile.j0
    diag = np.zeros(profile.chain_length)
    levels = scipy.linalg.eigvalsh_tridiagonal(diag, profile.couplings)
    spacings = np.diff(levels)
    mean = spacings.mean()
    if mean <= 0.0 or np.abs(spacings - mean).max() > _SPACING_RTOL * mean:
        raise NoExactRevivalError(
            "single-excitation spectrum is not an equally spaced ladder; "
            "no exact revival time exists for this profile")
    return float(2.0 * np.pi / mean)
