# cython: language_level=3, boundscheck=False, wraparound=False
# cython: initializedcheck=False, cdivision=True
"""Compiled kernels: batched reduced density matrices and concurrence.

Mirrors ``_pure`` exactly, including tolerances and error behaviour.
The eigenvalue solve uses LAPACK zgeev on the 4x4 product matrix; the
matrix is handed over row-major, which LAPACK reads as its transpose,
and eigenvalues are invariant under transposition.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt
from scipy.linalg.cython_lapack cimport zgeev

from ..errors import NumericalError

cnp.import_array()

NEG_TOL = 1e-12
IMAG_TOL = 1e-8

cdef double _C_NEG_TOL = 1e-12
cdef double _C_IMAG_TOL = 1e-8


def reduced_density_series(object amplitudes, object group_ids,
                           object pair_ids, Py_ssize_t n_groups):
    """Two-site reduced density matrices for a batch of states.

    See ``_pure.reduced_density_series`` for the contract.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] amps = \
        np.ascontiguousarray(amplitudes, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] gid = \
        np.ascontiguousarray(group_ids, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] pid = \
        np.ascontiguousarray(pair_ids, dtype=np.int64)
    cdef Py_ssize_t n_times = amps.shape[0]
    cdef Py_ssize_t dim = amps.shape[1]
    if gid.shape[0] != dim or pid.shape[0] != dim:
        raise ValueError("group and pair tables must match the basis dimension")
    cdef cnp.ndarray[cnp.complex128_t, ndim=3, mode="c"] out = \
        np.zeros((n_times, 4, 4), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] scratch = \
        np.zeros((n_groups, 4), dtype=np.complex128)
    cdef Py_ssize_t t, k, g, p, q
    cdef double complex v
    for t in range(n_times):
        for k in range(dim):
            scratch[gid[k], pid[k]] = amps[t, k]
        for g in range(n_groups):
            for p in range(4):
                v = scratch[g, p]
                if v.real != 0.0 or v.imag != 0.0:
                    for q in range(4):
                        out[t, p, q] = out[t, p, q] + v * scratch[g, q].conjugate()
        for k in range(dim):
            scratch[gid[k], pid[k]] = 0.0
    return out


def concurrence_series(object rhos_in):
    """Wootters concurrence for a batch of (T, 4, 4) density matrices."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=3, mode="c"] rhos = \
        np.ascontiguousarray(rhos_in, dtype=np.complex128)
    if rhos.shape[1] != 4 or rhos.shape[2] != 4:
        raise ValueError("expected (T, 4, 4) density matrices")
    cdef Py_ssize_t n_times = rhos.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] out = \
        np.empty(n_times, dtype=np.float64)

    # sigma_y (x) sigma_y: antidiagonal with signs (-1, 1, 1, -1)
    cdef double sgn[4]
    sgn[0] = -1.0; sgn[1] = 1.0; sgn[2] = 1.0; sgn[3] = -1.0

    cdef double complex rs[4][4]
    cdef double complex m[16]
    cdef double complex w[4]
    cdef double complex vdummy[1]
    cdef double complex work[32]
    cdef double rwork[8]
    cdef double roots[4]
    cdef int n = 4, lda = 4, ldv = 1, lwork = 32, info = 0
    cdef char jobn = b'N'
    cdef Py_ssize_t t, i, j, k
    cdef double complex acc
    cdef double re, im, tmp, c

    for t in range(n_times):
        # rs = rho @ S, with S[i, j] = sgn[j] on the antidiagonal j = 3 - i
        for i in range(4):
            for j in range(4):
                rs[i][j] = rhos[t, i, 3 - j] * sgn[j]
        # m = rs @ (conj(rho) @ S), stored row-major
        for i in range(4):
            for j in range(4):
                acc = 0.0
                for k in range(4):
                    acc = acc + rs[i][k] * (rhos[t, k, 3 - j].conjugate() * sgn[j])
                m[i * 4 + j] = acc
        zgeev(&jobn, &jobn, &n, &m[0], &lda, &w[0], &vdummy[0], &ldv,
              &vdummy[0], &ldv, &work[0], &lwork, &rwork[0], &info)
        if info != 0:
            raise NumericalError(f"zgeev failed with info={info}")
        for i in range(4):
            re = w[i].real
            im = w[i].imag
            if im > _C_IMAG_TOL or im < -_C_IMAG_TOL:
                raise NumericalError(
                    f"concurrence eigenvalues have imaginary part {abs(im):.3e}")
            if re < -_C_NEG_TOL:
                raise NumericalError(
                    f"concurrence eigenvalue {re:.3e} below -{_C_NEG_TOL:g}; "
                    "input is not a density matrix")
            roots[i] = sqrt(re) if re > 0.0 else 0.0
        # descending insertion sort of the four roots
        for i in range(1, 4):
            tmp = roots[i]
            j = i
            while j > 0 and roots[j - 1] < tmp:
                roots[j] = roots[j - 1]
                j -= 1
            roots[j] = tmp
        c = roots[0] - roots[1] - roots[2] - roots[3]
        if c < 0.0:
            c = 0.0
        elif c > 1.0:
            c = 1.0
        out[t] = c
    return out
