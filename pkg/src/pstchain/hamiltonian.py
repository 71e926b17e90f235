"""Chain Hamiltonians in the truncated occupation basis.

The unperturbed model is an XY chain whose nearest-neighbour couplings
follow the perfect-transfer profile J_i = j0 * sqrt(i * (N - i)).  Five
perturbations can be layered on top, always in the same order: site
energies, excitation-excitation interaction, next-nearest-neighbour
hopping, multiplicative fabrication noise on existing couplings, and
random long-range couplings on matrix elements that are still zero.
The random stages draw from a counter-based generator keyed on
``seed XOR realization``, so any realisation can be rebuilt in
isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError
from .hilbert import Basis

_SEED_LIMIT = 2 ** 64
DEFAULT_SEED = 12345


@dataclass(frozen=True)
class CouplingProfile:
    """Nearest-neighbour couplings J_{i,i+1} for i = 1..N-1.

    ``couplings[i - 1]`` holds J_{i,i+1}.  ``j0`` is the overall energy
    scale the perturbations are expressed in.
    """

    chain_length: int
    j0: float
    couplings: np.ndarray = field(repr=False)
    label: str = "custom"

    def __post_init__(self):
        arr = np.asarray(self.couplings, dtype=np.float64)
        if arr.shape != (self.chain_length - 1,):
            raise ConfigurationError(
                f"expected {self.chain_length - 1} couplings, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
            raise ConfigurationError("couplings must be finite and positive")
        if not (math.isfinite(self.j0) and self.j0 > 0.0):
            raise ConfigurationError(f"j0 must be finite and positive, got {self.j0}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "couplings", arr)

    @property
    def j_max(self) -> float:
        """Largest coupling; sets the scale of long-range noise."""
        return float(self.couplings.max())

    def coupling(self, i: int) -> float:
        """J_{i,i+1} for a 1-based bond index."""
        if not 1 <= i <= self.chain_length - 1:
            raise DomainError(f"bond index {i} outside 1..{self.chain_length - 1}")
        return float(self.couplings[i - 1])


def pst_couplings(chain_length: int, j0: float = 1.0) -> CouplingProfile:
    """Profile engineered for exact mirror transfer at t = pi / j0."""
    i = np.arange(1, chain_length, dtype=np.float64)
    return CouplingProfile(chain_length, j0,
                           j0 * np.sqrt(i * (chain_length - i)), label="pst")


def uniform_couplings(chain_length: int, j: float = 1.0) -> CouplingProfile:
    """Constant couplings; has no exact revival beyond three sites."""
    return CouplingProfile(chain_length, j,
                           np.full(chain_length - 1, j, dtype=np.float64),
                           label="uniform")


@dataclass(frozen=True)
class PerturbationSpec:
    """Strengths of the five perturbation stages plus the RNG seed.

    ``epsilon`` is either a single shift applied to every site or a
    sequence of per-site energies in units of j0.  ``eta`` and ``chi``
    scale flat [0, 1) draws and must be non-negative; the deterministic
    strengths may take either sign.
    """

    eta: float = 0.0
    epsilon: float | tuple[float, ...] = 0.0
    gamma: float = 0.0
    delta: float = 0.0
    chi: float = 0.0
    seed: int = DEFAULT_SEED
    long_range_cross_sector: bool = True
    long_range_diagonal: bool = False

    def __post_init__(self):
        for name in ("eta", "gamma", "delta", "chi"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigurationError(f"{name} must be finite, got {value}")
        for name in ("eta", "chi"):
            if getattr(self, name) < 0.0:
                raise ConfigurationError(f"{name} must be non-negative")
        eps = self.epsilon
        if isinstance(eps, (int, float)):
            if not math.isfinite(eps):
                raise ConfigurationError(f"epsilon must be finite, got {eps}")
        else:
            eps = tuple(float(e) for e in eps)
            if not all(math.isfinite(e) for e in eps):
                raise ConfigurationError("epsilon entries must be finite")
            object.__setattr__(self, "epsilon", eps)
        if not isinstance(self.seed, int) or not 0 <= self.seed < _SEED_LIMIT:
            raise ConfigurationError(f"seed must be an integer in [0, 2^64), got {self.seed}")

    def epsilon_vector(self, chain_length: int) -> np.ndarray:
        """Per-site energies; index 0 is site 1."""
        if isinstance(self.epsilon, tuple):
            if len(self.epsilon) != chain_length:
                raise ConfigurationError(
                    f"epsilon has {len(self.epsilon)} entries for a "
                    f"{chain_length}-site chain")
            return np.asarray(self.epsilon, dtype=np.float64)
        return np.full(chain_length, float(self.epsilon), dtype=np.float64)

    def rng(self, realization: int) -> np.random.Generator:
        """Counter-based generator for one realisation.

        The Philox key is ``seed XOR realization``, which keeps streams
        for different realisations independent without sequential
        spawning.
        """
        if realization < 0:
            raise DomainError(f"realization index must be >= 0, got {realization}")
        key = (self.seed ^ realization) % _SEED_LIMIT
        return np.random.Generator(np.random.Philox(key=key))

    def is_random(self) -> bool:
        return self.eta != 0.0 or self.chi != 0.0


def _hop_elements(basis: Basis, site_a: int, site_b: int) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (k, k2) for moving one excitation between two sites.

    Sites are 0-based here.  Each pair is reported once with the
    occupied site at ``site_a``; the Hermitian mirror is added by the
    callers.
    """
    rows, cols = [], []
    for k, bits in enumerate(basis.states):
        if bits[site_a] == 1 and bits[site_b] == 0:
            moved = list(bits)
            moved[site_a], moved[site_b] = 0, 1
            k2 = basis.index.get(tuple(moved))
            if k2 is not None:
                rows.append(k)
                cols.append(k2)
    return np.asarray(rows, dtype=np.intp), np.asarray(cols, dtype=np.intp)


def build_base(basis: Basis, profile: CouplingProfile) -> np.ndarray:
    """Dense Hamiltonian of the bare chain, nearest-neighbour hops only."""
    if profile.chain_length != basis.chain_length:
        raise DomainError("coupling profile and basis disagree on chain length")
    dim = basis.dimension
    h = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(basis.chain_length - 1):
        rows, cols = _hop_elements(basis, i, i + 1)
        h[rows, cols] += profile.couplings[i]
        h[cols, rows] += profile.couplings[i]
    return h


def add_site_energies(h: np.ndarray, basis: Basis, energies: np.ndarray) -> np.ndarray:
    """Add sum_i energies[i] * n_i to the diagonal, in place."""
    energies = np.asarray(energies, dtype=np.float64)
    if energies.shape != (basis.chain_length,):
        raise DomainError(
            f"expected {basis.chain_length} site energies, got shape {energies.shape}")
    diag = basis.occupations().astype(np.float64) @ energies
    h[np.diag_indices_from(h)] += diag
    return h


def add_excitation_interaction(h: np.ndarray, basis: Basis,
                               gamma: float, j0: float) -> np.ndarray:
    """Add gamma * j0 per adjacent occupied pair to the diagonal, in place."""
    occ = basis.occupations()
    pairs = (occ[:, :-1] * occ[:, 1:]).sum(axis=1).astype(np.float64)
    h[np.diag_indices_from(h)] += gamma * j0 * pairs
    return h


def add_next_nearest(h: np.ndarray, basis: Basis, profile: CouplingProfile,
                     delta: float) -> np.ndarray:
    """Add hops between sites i and i+2, in place.

    The strength interpolates the two bonds it bridges:
    J_{i,i+2} = delta * (J_{i,i+1} + J_{i+1,i+2}) / 2.
    """
    if profile.chain_length != basis.chain_length:
        raise DomainError("coupling profile and basis disagree on chain length")
    j = profile.couplings
    for i in range(basis.chain_length - 2):
        strength = delta * (j[i] + j[i + 1]) / 2.0
        rows, cols = _hop_elements(basis, i, i + 2)
        h[rows, cols] += strength
        h[cols, rows] += strength
    return h


def apply_offdiagonal_noise(h: np.ndarray, eta: float, j0: float,
                            rng: np.random.Generator) -> np.ndarray:
    """Add eta * d * j0, d ~ U[0, 1), to every currently non-zero element.

    One draw per independent element (upper triangle including the
    diagonal, row-major order); the lower triangle mirrors it so the
    matrix stays Hermitian.  Elements that are exactly zero are left for
    the long-range stage.
    """
    rows, cols = np.triu_indices(h.shape[0])
    occupied = h[rows, cols] != 0.0
    rows, cols = rows[occupied], cols[occupied]
    h[rows, cols] += eta * j0 * rng.random(rows.size)
    h[cols, rows] = np.conj(h[rows, cols])
    return h


def apply_long_range(h: np.ndarray, basis: Basis, chi: float, j_max: float,
                     rng: np.random.Generator,
                     include_cross_sector: bool = True,
                     include_diagonal: bool = False) -> np.ndarray:
    """Add chi * d * j_max, d ~ U[0, 1), to every still-zero element.

    By default only off-diagonal elements are touched and pairs of
    states in different excitation sectors are included, modelling
    stray couplings that do not conserve excitation number.  One draw
    per selected element, upper triangle in row-major order.
    """
    rows, cols = np.triu_indices(h.shape[0], k=0 if include_diagonal else 1)
    empty = h[rows, cols] == 0.0
    rows, cols = rows[empty], cols[empty]
    if not include_cross_sector:
        weights = basis.occupations().sum(axis=1)
        same = weights[rows] == weights[cols]
        rows, cols = rows[same], cols[same]
    h[rows, cols] += chi * j_max * rng.random(rows.size)
    h[cols, rows] = np.conj(h[rows, cols])
    return h


def build_perturbed(basis: Basis, profile: CouplingProfile,
                    perturbation: PerturbationSpec,
                    realization: int = 0) -> np.ndarray:
    """Assemble the full Hamiltonian for one realisation.

    Stages run in a fixed order (site energies, interaction,
    next-nearest hops, fabrication noise, long-range couplings); a stage
    with zero strength is skipped entirely and consumes no random draws.
    """
    h = build_base(basis, profile)
    energies = perturbation.epsilon_vector(basis.chain_length)
    if np.any(energies != 0.0):
        add_site_energies(h, basis, energies)
    if perturbation.gamma != 0.0:
        add_excitation_interaction(h, basis, perturbation.gamma, profile.j0)
    if perturbation.delta != 0.0:
        add_next_nearest(h, basis, profile, perturbation.delta)
    if perturbation.is_random():
        rng = perturbation.rng(realization)
        if perturbation.eta != 0.0:
            apply_offdiagonal_noise(h, perturbation.eta, profile.j0, rng)
        if perturbation.chi != 0.0:
            apply_long_range(h, basis, perturbation.chi, profile.j_max, rng,
                             perturbation.long_range_cross_sector,
                             perturbation.long_range_diagonal)
    return h
