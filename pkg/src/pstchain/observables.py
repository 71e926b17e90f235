"""Transfer fidelity and two-site entanglement of formation.

The reduced density matrix of a site pair is exact on the truncated
basis: states are grouped by the configuration of the remaining sites
and amplitudes within a group combine coherently.  Entanglement of
formation comes from the Wootters concurrence of that 4x4 matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError, NumericalError
from .evolution import TimeGrid
from .hilbert import Basis, StateVector

_DENSITY_TOL = 1e-9


def fidelity(psi: StateVector, target: StateVector) -> float:
    """Squared overlap |<target|psi>|^2."""
    if psi.basis != target.basis:
        raise DomainError("states live in different bases")
    overlap = np.vdot(target.amplitudes, psi.amplitudes)
    value = float(np.abs(overlap) ** 2)
    if value > 1.0 + 1e-9:
        raise NumericalError(f"fidelity {value} exceeds 1 beyond tolerance")
    return min(value, 1.0)


@dataclass(frozen=True)
class TwoQubitDensity:
    """Reduced state of two sites in the |00>,|01>,|10>,|11> basis.

    The first tensor factor is ``sites[0]``.  Construction checks
    hermiticity, unit trace and positivity.
    """

    sites: tuple[int, int]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=np.complex128)
        if rho.shape != (4, 4):
            raise DomainError(f"expected a 4x4 matrix, got shape {rho.shape}")
        if np.abs(rho - rho.conj().T).max() > _DENSITY_TOL:
            raise NumericalError("reduced density matrix is not Hermitian")
        trace = rho.trace().real
        if abs(trace - 1.0) > _DENSITY_TOL:
            raise NumericalError(f"reduced density matrix has trace {trace:.12g}")
        if np.linalg.eigvalsh(rho).min() < -_DENSITY_TOL:
            raise NumericalError("reduced density matrix is not positive")
        rho = rho.copy()
        rho.setflags(write=False)
        object.__setattr__(self, "matrix", rho)


def _pair_table(basis: Basis, site_a: int, site_b: int):
    """Group/pair index tables for tracing out all sites but two.

    ``group_ids[k]`` labels the occupation pattern of the spectator
    sites of basis state k; ``pair_ids[k]`` encodes the two kept sites
    as 2 * n_a + n_b.  Cached per basis and site pair.
    """
    key = (site_a, site_b)
    cached = basis._pair_tables.get(key)
    if cached is not None:
        return cached
    ia, ib = site_a - 1, site_b - 1
    group_ids = np.empty(basis.dimension, dtype=np.int64)
    pair_ids = np.empty(basis.dimension, dtype=np.int64)
    groups: dict[tuple[int, ...], int] = {}
    for k, bits in enumerate(basis.states):
        rest = tuple(b for j, b in enumerate(bits) if j != ia and j != ib)
        group_ids[k] = groups.setdefault(rest, len(groups))
        pair_ids[k] = 2 * bits[ia] + bits[ib]
    table = (group_ids, pair_ids, len(groups))
    basis._pair_tables[key] = table
    return table


def _check_sites(basis: Basis, site_a: int, site_b: int) -> None:
    n = basis.chain_length
    for s in (site_a, site_b):
        if not 1 <= s <= n:
            raise DomainError(f"site {s} outside 1..{n}")
    if site_a == site_b:
        raise DomainError("the two sites must be distinct")


def reduced_density_two_qubit(psi: StateVector, site_a: int,
                              site_b: int) -> TwoQubitDensity:
    """Trace out everything except two sites (1-based)."""
    _check_sites(psi.basis, site_a, site_b)
    group_ids, pair_ids, n_groups = _pair_table(psi.basis, site_a, site_b)
    rho = kernels.reduced_density_series(
        psi.amplitudes[np.newaxis, :], group_ids, pair_ids, n_groups)[0]
    return TwoQubitDensity((site_a, site_b), rho)


def concurrence(rho: TwoQubitDensity) -> float:
    """Wootters concurrence of a two-qubit state."""
    return float(kernels.concurrence_series(rho.matrix[np.newaxis, :, :])[0])


def eof_from_concurrence(c) -> np.ndarray | float:
    """Entanglement of formation as a function of concurrence.

    Binary entropy of (1 + sqrt(1 - C^2)) / 2, in bits.  Works on
    scalars and arrays.
    """
    c = np.clip(np.asarray(c, dtype=np.float64), 0.0, 1.0)
    x = 0.5 * (1.0 + np.sqrt(1.0 - c * c))
    with np.errstate(divide="ignore", invalid="ignore"):
        ent = -x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x)
    ent = np.where(np.isfinite(ent), ent, 0.0)
    return float(ent) if ent.ndim == 0 else ent


def eof(rho: TwoQubitDensity) -> float:
    """Entanglement of formation of a two-qubit state."""
    return float(eof_from_concurrence(concurrence(rho)))


@dataclass(frozen=True)
class ObservableSeries:
    """Fidelity and EoF sampled over one trajectory."""

    grid: TimeGrid
    fidelity: np.ndarray = field(repr=False)
    eof: np.ndarray = field(repr=False)
    fidelity_target: str = "initial"
    eof_sites: tuple[int, int] = (1, 2)


def evaluate_series(basis: Basis, trajectory: np.ndarray, grid: TimeGrid,
                    target: StateVector, eof_sites: tuple[int, int],
                    fidelity_target: str = "initial") -> ObservableSeries:
    """Fidelity against a fixed target and EoF of a site pair, per time.

    ``trajectory`` is the (T, dimension) array from sample_trajectory.
    """
    trajectory = np.asarray(trajectory, dtype=np.complex128)
    if trajectory.shape != (len(grid), basis.dimension):
        raise DomainError(
            f"trajectory shape {trajectory.shape} does not match grid "
            f"({len(grid)} points) and basis dimension {basis.dimension}")
    if target.basis != basis:
        raise DomainError("target state belongs to a different basis")
    site_a, site_b = eof_sites
    _check_sites(basis, site_a, site_b)

    overlaps = trajectory @ target.amplitudes.conj()
    fid = np.minimum(np.abs(overlaps) ** 2, 1.0)

    group_ids, pair_ids, n_groups = _pair_table(basis, site_a, site_b)
    rhos = kernels.reduced_density_series(trajectory, group_ids, pair_ids, n_groups)
    ent = eof_from_concurrence(kernels.concurrence_series(rhos))
    return ObservableSeries(grid, fid, np.asarray(ent),
                            fidelity_target, (site_a, site_b))
