"""Truncated excitation-number Hilbert space for a spin-1/2 chain.

Sites are numbered 1..N.  An occupation state is a tuple of N bits,
bit i-1 giving the occupation of site i, so ``(1, 1, 0, 0)`` means the
two leftmost spins of a four-site chain are flipped.  The basis keeps
every occupation state with Hamming weight up to ``max_excitations``,
ordered by weight and lexicographically within each weight sector.
With the default of two excitations the dimension is
1 + N + N*(N-1)/2.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError

# Dense eigensolves beyond this dimension are not worth supporting;
# N = 12 untruncated (2^12) is the largest full-basis cross-check.
_MAX_DIMENSION = 4096

_MAX_SITES = 20
_MIN_SITES = 2


class InputKind(enum.Enum):
    """Canonical initial states used throughout the transfer studies.

    TYPE_I    two excitations on sites 1 and 2.
    TYPE_II   one excitation shared between sites 1 and 2,
              (|10...> + |01...>)/sqrt(2).
    TYPE_III  product of |+> on site 1 and |+> on site N with the rest
              empty; superposes weights 0, 1 and 2.
    """

    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    TYPE_III = "TypeIII"

    @classmethod
    def parse(cls, label: str) -> "InputKind":
        for kind in cls:
            if kind.value == label:
                return kind
        known = ", ".join(k.value for k in cls)
        raise ConfigurationError(f"unknown input kind {label!r}; expected one of {known}")


class Basis:
    """Ordered collection of occupation states for a given chain.

    Instances are immutable.  Two bases compare equal when they describe
    the same chain length and excitation cutoff.
    """

    def __init__(self, chain_length: int, max_excitations: int,
                 states: tuple[tuple[int, ...], ...]):
        self.chain_length = chain_length
        self.max_excitations = max_excitations
        self.states = states
        self.index = {bits: k for k, bits in enumerate(states)}
        self._occupations = np.array(states, dtype=np.int8)
        self._occupations.setflags(write=False)
        self._pair_tables: dict[tuple[int, int], tuple] = {}
        self._mirror_perm: np.ndarray | None = None

    @property
    def dimension(self) -> int:
        return len(self.states)

    def occupations(self) -> np.ndarray:
        """(dimension, chain_length) int8 array of site occupations."""
        return self._occupations

    def state_index(self, bits: tuple[int, ...]) -> int:
        try:
            return self.index[tuple(bits)]
        except KeyError:
            raise DomainError(f"occupation state {bits!r} is not in the basis") from None

    def mirror_permutation(self) -> np.ndarray:
        """Index map sending each state to its spatially reflected image."""
        if self._mirror_perm is None:
            perm = np.array([self.index[bits[::-1]] for bits in self.states], dtype=np.int64)
            perm.setflags(write=False)
            self._mirror_perm = perm
        return self._mirror_perm

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Basis):
            return NotImplemented
        return (self.chain_length == other.chain_length
                and self.max_excitations == other.max_excitations)

    def __hash__(self) -> int:
        return hash((self.chain_length, self.max_excitations))

    def __repr__(self) -> str:
        return (f"Basis(chain_length={self.chain_length}, "
                f"max_excitations={self.max_excitations}, "
                f"dimension={self.dimension})")


def enumerate_basis(chain_length: int, max_excitations: int = 2) -> Basis:
    """Build the occupation basis for a chain.

    States are ordered by excitation number and, within a sector,
    lexicographically on the bit tuple; the ordering is part of the
    reproducibility contract because random perturbations assign draws
    to matrix entries by basis position.
    """
    if not _MIN_SITES <= chain_length <= _MAX_SITES:
        raise ConfigurationError(
            f"chain_length must be in [{_MIN_SITES}, {_MAX_SITES}], got {chain_length}")
    if not 0 <= max_excitations <= chain_length:
        raise ConfigurationError(
            f"max_excitations must be in [0, {chain_length}], got {max_excitations}")

    dimension = sum(math.comb(chain_length, k) for k in range(max_excitations + 1))
    if dimension > _MAX_DIMENSION:
        raise ConfigurationError(
            f"basis dimension {dimension} exceeds the dense-solver limit {_MAX_DIMENSION}")

    states: list[tuple[int, ...]] = []
    for weight in range(max_excitations + 1):
        sector = []
        for positions in itertools.combinations(range(chain_length), weight):
            bits = [0] * chain_length
            for p in positions:
                bits[p] = 1
            sector.append(tuple(bits))
        sector.sort()  # ascending lexicographic on the bit tuple
        states.extend(sector)
    return Basis(chain_length, max_excitations, tuple(states))


@dataclass(frozen=True)
class StateVector:
    """Normalised state expressed in a fixed occupation basis."""

    basis: Basis
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.basis.dimension,):
            raise DomainError(
                f"amplitude vector has shape {amps.shape}, "
                f"expected ({self.basis.dimension},)")
        norm = np.linalg.norm(amps)
        if not np.isclose(norm, 1.0, rtol=0.0, atol=1e-9):
            raise DomainError(f"state vector norm is {norm:.12g}, expected 1")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def amplitude(self, bits: tuple[int, ...]) -> complex:
        """Amplitude on one occupation state."""
        return complex(self.amplitudes[self.basis.state_index(bits)])


def _basis_vector(basis: Basis, bits: tuple[int, ...]) -> np.ndarray:
    vec = np.zeros(basis.dimension, dtype=np.complex128)
    vec[basis.state_index(bits)] = 1.0
    return vec


def make_input_state(basis: Basis, kind: InputKind) -> StateVector:
    """Construct one of the canonical initial states.

    All three kinds place weight on sectors up to two excitations, so
    the basis must keep at least that cutoff (TYPE_II needs one).
    """
    n = basis.chain_length
    needed = 1 if kind is InputKind.TYPE_II else 2
    if basis.max_excitations < needed:
        raise DomainError(
            f"{kind.value} needs max_excitations >= {needed}, "
            f"basis has {basis.max_excitations}")

    empty = (0,) * n
    site = lambda i: tuple(1 if j == i else 0 for j in range(n))

    if kind is InputKind.TYPE_I:
        bits = (1, 1) + (0,) * (n - 2)
        amps = _basis_vector(basis, bits)
    elif kind is InputKind.TYPE_II:
        amps = (_basis_vector(basis, site(0)) + _basis_vector(basis, site(1))) / np.sqrt(2.0)
    else:
        both = tuple(1 if j in (0, n - 1) else 0 for j in range(n))
        amps = 0.5 * (_basis_vector(basis, empty)
                      + _basis_vector(basis, site(0))
                      + _basis_vector(basis, site(n - 1))
                      + _basis_vector(basis, both))
    return StateVector(basis, amps)


def make_custom_state(basis: Basis,
                      terms: list[tuple[tuple[int, ...], complex]]) -> StateVector:
    """Build a state from (occupation bits, amplitude) terms.

    Amplitudes on repeated states are summed.  The result is normalised,
    so only relative amplitudes matter.
    """
    if not terms:
        raise DomainError("custom state needs at least one term")
    amps = np.zeros(basis.dimension, dtype=np.complex128)
    for bits, amplitude in terms:
        amps[basis.state_index(tuple(bits))] += complex(amplitude)
    norm = np.linalg.norm(amps)
    if norm < 1e-12:
        raise DomainError("custom state amplitudes sum to zero")
    return StateVector(basis, amps / norm)


def mirror_state(basis: Basis, psi: StateVector) -> StateVector:
    """Spatial reflection, relabelling site i as N + 1 - i."""
    if psi.basis != basis:
        raise DomainError("state vector belongs to a different basis")
    perm = basis.mirror_permutation()
    mirrored = np.zeros_like(psi.amplitudes)
    mirrored[perm] = psi.amplitudes
    return StateVector(basis, mirrored)
