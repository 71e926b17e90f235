"""Backend parity: the compiled kernels must match the numpy fallback."""

import os
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

import reference
from pstchain import NumericalError, enumerate_basis, kernels
from pstchain.observables import _pair_table


def _random_trajectory(basis, n_times, seed):
    rng = np.random.default_rng(seed)
    amps = (rng.normal(size=(n_times, basis.dimension))
            + 1j * rng.normal(size=(n_times, basis.dimension)))
    return amps / np.linalg.norm(amps, axis=1, keepdims=True)


def test_pure_backend_always_available():
    assert "pure" in kernels.available_backends()
    assert kernels.backend_name() in kernels.available_backends()
    with pytest.raises(KeyError):
        kernels.get_backend("nope")


@pytest.mark.parametrize("name", kernels.available_backends())
def test_reduced_density_against_brute_force(name):
    backend = kernels.get_backend(name)
    basis = enumerate_basis(6, 2)
    group_ids, pair_ids, n_groups = _pair_table(basis, 2, 5)
    trajectory = _random_trajectory(basis, 7, seed=1)
    rhos = backend.reduced_density_series(trajectory, group_ids, pair_ids, n_groups)
    assert rhos.shape == (7, 4, 4)
    for row, rho in zip(trajectory, rhos):
        full = reference.embed(basis, row)
        assert_allclose(rho, reference.ptrace_pair(full, 6, 2, 5), atol=1e-12)


@pytest.mark.parametrize("name", kernels.available_backends())
def test_concurrence_against_sqrtm_oracle(name):
    backend = kernels.get_backend(name)
    rng = np.random.default_rng(5)
    rhos = []
    for _ in range(30):
        a = rng.normal(size=4) + 1j * rng.normal(size=4)
        b = rng.normal(size=4) + 1j * rng.normal(size=4)
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        w = rng.uniform(0.0, 1.0)
        rhos.append(w * np.outer(a, a.conj()) + (1 - w) * np.outer(b, b.conj()))
    rhos = np.array(rhos)
    ours = backend.concurrence_series(rhos)
    expected = [reference.concurrence_sqrtm(rho) for rho in rhos]
    assert_allclose(ours, expected, atol=1e-8)


def test_backends_agree_exactly():
    if len(kernels.available_backends()) < 2:
        pytest.skip("compiled backend not built")
    pure = kernels.get_backend("pure")
    fast = kernels.get_backend("compiled")
    basis = enumerate_basis(9, 2)
    group_ids, pair_ids, n_groups = _pair_table(basis, 1, 9)
    trajectory = _random_trajectory(basis, 64, seed=12)
    rho_pure = pure.reduced_density_series(trajectory, group_ids, pair_ids, n_groups)
    rho_fast = fast.reduced_density_series(trajectory, group_ids, pair_ids, n_groups)
    assert_allclose(rho_fast, rho_pure, atol=1e-15)
    c_pure = pure.concurrence_series(rho_pure)
    c_fast = fast.concurrence_series(rho_fast)
    assert_allclose(c_fast, c_pure, atol=1e-12)


@pytest.mark.parametrize("name", kernels.available_backends())
def test_non_density_input_raises(name):
    backend = kernels.get_backend(name)
    bad = np.eye(4, dtype=complex)[np.newaxis] * 5.0  # trace 20, eigenvalues blow up
    bad[0, 0, 0] = -3.0
    with pytest.raises(NumericalError):
        backend.concurrence_series(bad)


@pytest.mark.parametrize("name", kernels.available_backends())
def test_concurrence_shape_validation(name):
    backend = kernels.get_backend(name)
    with pytest.raises(ValueError):
        backend.concurrence_series(np.zeros((3, 5, 5), dtype=complex))


def test_env_var_forces_pure_backend():
    env = dict(os.environ, PSTCHAIN_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "from pstchain import kernels; print(kernels.backend_name())"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "pure"
