"""Independent reference implementations used as test oracles.

Everything here works on the complete 2^N product space with explicit
Kronecker constructions, scipy.linalg.expm for propagation, a
reshape-based partial trace and the matrix-square-root form of the
concurrence.  None of it shares code paths with the package: the
package uses a truncated basis, a dense eigh propagator and batched
kernels, so agreement is meaningful.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

_RAISE = np.array([[0.0, 0.0], [1.0, 0.0]])   # |1><0|
_LOWER = _RAISE.T
_NUMBER = np.diag([0.0, 1.0])

# sigma_y (x) sigma_y in the |00>,|01>,|10>,|11> ordering
SPIN_FLIP = np.array([
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
])


def op_at(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Single-site operator embedded in the 2^N space; site is 1-based,
    site 1 is the leftmost tensor factor."""
    out = np.array([[1.0]])
    for s in range(1, n_sites + 1):
        out = np.kron(out, op if s == site else np.eye(2))
    return out


def hop(i: int, j: int, n_sites: int) -> np.ndarray:
    """Excitation exchange between two sites (XY coupling)."""
    term = op_at(_RAISE, i, n_sites) @ op_at(_LOWER, j, n_sites)
    return term + term.T


def full_hamiltonian(couplings, eps=None, gamma: float = 0.0,
                     j0: float = 1.0, delta: float = 0.0) -> np.ndarray:
    """Deterministic chain Hamiltonian on the full product space."""
    couplings = np.asarray(couplings, dtype=np.float64)
    n = couplings.size + 1
    h = np.zeros((2 ** n, 2 ** n))
    for i in range(1, n):
        h += couplings[i - 1] * hop(i, i + 1, n)
    if eps is not None:
        for i in range(1, n + 1):
            h += eps[i - 1] * op_at(_NUMBER, i, n)
    if gamma != 0.0:
        for i in range(1, n):
            h += (gamma * j0 * op_at(_NUMBER, i, n)
                  @ op_at(_NUMBER, i + 1, n))
    if delta != 0.0:
        for i in range(1, n - 1):
            strength = delta * (couplings[i - 1] + couplings[i]) / 2.0
            h += strength * hop(i, i + 2, n)
    return h


def bits_to_index(bits) -> int:
    """Full-space index of an occupation state, site 1 most significant."""
    index = 0
    for b in bits:
        index = (index << 1) | int(b)
    return index


def embed(basis, amplitudes) -> np.ndarray:
    """Lift truncated-basis amplitudes into the full product space."""
    full = np.zeros(2 ** basis.chain_length, dtype=np.complex128)
    for k, bits in enumerate(basis.states):
        full[bits_to_index(bits)] = amplitudes[k]
    return full


def project(basis, full_vector) -> np.ndarray:
    """Restrict a full-space vector to the truncated basis."""
    return np.array([full_vector[bits_to_index(bits)] for bits in basis.states])


def expm_evolve(h: np.ndarray, psi: np.ndarray, t: float) -> np.ndarray:
    return scipy.linalg.expm(-1j * h * t) @ psi


def ptrace_pair(full_psi: np.ndarray, n_sites: int, site_a: int,
                site_b: int) -> np.ndarray:
    """Reduced density matrix of two sites from a full-space pure state."""
    tensor = full_psi.reshape((2,) * n_sites)
    tensor = np.moveaxis(tensor, (site_a - 1, site_b - 1), (0, 1))
    matrix = tensor.reshape(4, -1)
    return matrix @ matrix.conj().T


def concurrence_sqrtm(rho: np.ndarray) -> float:
    """Wootters concurrence via the matrix-square-root definition."""
    rho_tilde = SPIN_FLIP @ rho.conj() @ SPIN_FLIP
    root = scipy.linalg.sqrtm(rho)
    inner = scipy.linalg.sqrtm(root @ rho_tilde @ root)
    lam = np.sort(np.linalg.eigvalsh(np.real_if_close(inner)))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def eof_reference(c: float) -> float:
    """Binary entropy of (1 + sqrt(1 - C^2)) / 2, in bits."""
    x = 0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c)))
    total = 0.0
    for p in (x, 1.0 - x):
        if p > 0.0:
            total -= p * np.log2(p)
    return total


def ladder_char_poly(n_sites: int, value: int) -> int:
    """Characteristic polynomial of the engineered single-excitation
    block at an integer argument, in exact integer arithmetic.

    The block is tridiagonal with zero diagonal and squared couplings
    i * (N - i), so det(x - T) follows the three-term recurrence
    p_k = x * p_{k-1} - (k-1)(N-k+1) * p_{k-2}.
    """
    p_prev, p = 1, value
    for k in range(2, n_sites + 1):
        b2 = (k - 1) * (n_sites - (k - 1))
        p_prev, p = p, value * p - b2 * p_prev
    return p
