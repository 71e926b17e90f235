"""Pure numpy kernels; reference implementation for the compiled ones.

Both backends implement the same two batched primitives.  The compiled
version must agree with this one to machine precision; the parity tests
enforce that.
"""

from __future__ import annotations

import numpy as np

from ..errors import NumericalError

# Eigenvalues of rho * rho_tilde below -NEG_TOL mean the input was not a
# density matrix; anything in [-NEG_TOL, 0) is rounding and is clamped.
NEG_TOL = 1e-12
IMAG_TOL = 1e-8

# sigma_y (x) sigma_y in the |00>,|01>,|10>,|11> basis: antidiagonal
# with signs (-1, 1, 1, -1).
_SPIN_FLIP = np.zeros((4, 4))
_SPIN_FLIP[np.arange(4), np.arange(3, -1, -1)] = (-1.0, 1.0, 1.0, -1.0)


def reduced_density_series(amplitudes: np.ndarray, group_ids: np.ndarray,
                           pair_ids: np.ndarray, n_groups: int) -> np.ndarray:
    """Two-site reduced density matrices for a batch of states.

    ``amplitudes`` is (T, D).  ``group_ids[k]`` labels the configuration
    of all other sites for basis state k and ``pair_ids[k]`` its
    two-site pattern in the |00>,|01>,|10>,|11> order.  Returns
    (T, 4, 4) density matrices.
    """
    amplitudes = np.asarray(amplitudes, dtype=np.complex128)
    n_times = amplitudes.shape[0]
    scratch = np.zeros((n_times, n_groups, 4), dtype=np.complex128)
    scratch[:, group_ids, pair_ids] = amplitudes
    return np.einsum("tgp,tgq->tpq", scratch, scratch.conj())


def concurrence_series(rhos: np.ndarray) -> np.ndarray:
    """Wootters concurrence for a batch of (T, 4, 4) density matrices."""
    rhos = np.asarray(rhos, dtype=np.complex128)
    if rhos.ndim != 3 or rhos.shape[1:] != (4, 4):
        raise ValueError(f"expected (T, 4, 4) density matrices, got {rhos.shape}")
    flipped = _SPIN_FLIP @ rhos.conj() @ _SPIN_FLIP
    lam = np.linalg.eigvals(rhos @ flipped)
    if lam.size:
        worst_imag = np.abs(lam.imag).max()
        if worst_imag > IMAG_TOL:
            raise NumericalError(
                f"concurrence eigenvalues have imaginary part {worst_imag:.3e}")
        worst_neg = lam.real.min()
        if worst_neg < -NEG_TOL:
            raise NumericalError(
                f"concurrence eigenvalue {worst_neg:.3e} below -{NEG_TOL:g}; "
                "input is not a density matrix")
    roots = np.sqrt(np.clip(lam.real, 0.0, None))
    roots = np.sort(roots, axis=1)[:, ::-1]
    c = roots[:, 0] - roots[:, 1] - roots[:, 2] - roots[:, 3]
    return np.clip(c, 0.0, 1.0)
