"""Timing comparison of the pure-numpy and compiled kernel backends.

Runs the two hot kernels (reduced-density batching and batched
concurrence) on trajectory-sized workloads and prints a table with the
speedup of the compiled extension over the fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeats 5] [--points 801]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from pstchain import enumerate_basis
from pstchain.kernels import available_backends, get_backend
from pstchain.observables import _pair_table


def _workload(length: int, points: int, rng: np.random.Generator):
    basis = enumerate_basis(length, 2)
    amplitudes = rng.normal(size=(points, basis.dimension)) \
        + 1j * rng.normal(size=(points, basis.dimension))
    amplitudes /= np.linalg.norm(amplitudes, axis=1, keepdims=True)
    group_ids, pair_ids, n_groups = _pair_table(basis, 1, length)
    return basis, amplitudes, group_ids, pair_ids, n_groups


def _time(func, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        func()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--points", type=int, default=801)
    parser.add_argument("--lengths", type=int, nargs="+", default=[10, 15, 20])
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    if "compiled" not in backends:
        print("compiled extension not built; timing the fallback only")

    rng = np.random.default_rng(7)
    header = f"{'workload':<28}" + "".join(f"{name:>12}" for name in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for length in args.lengths:
        basis, amps, group_ids, pair_ids, n_groups = _workload(
            length, args.points, rng)
        rhos = {}
        row_times = {}
        for name in backends:
            backend = get_backend(name)
            rhos[name] = backend.reduced_density_series(
                amps, group_ids, pair_ids, n_groups)
            row_times[name] = _time(
                lambda b=backend: b.reduced_density_series(
                    amps, group_ids, pair_ids, n_groups),
                args.repeats)
        label = f"rho 2q  N={length} T={args.points}"
        row = f"{label:<28}" + "".join(
            f"{row_times[name] * 1e3:>10.2f}ms" for name in backends)
        if len(backends) == 2:
            row += f"{row_times['pure'] / row_times['compiled']:>9.1f}x"
        print(row)

        for name in backends:
            backend = get_backend(name)
            batch = rhos[name]
            row_times[name] = _time(
                lambda b=backend, r=batch: b.concurrence_series(r),
                args.repeats)
        label = f"concurrence N={length}"
        row = f"{label:<28}" + "".join(
            f"{row_times[name] * 1e3:>10.2f}ms" for name in backends)
        if len(backends) == 2:
            row += f"{row_times['pure'] / row_times['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
