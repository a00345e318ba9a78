"""Benchmark the numba kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 8,10,12] [--repeat 3]
"""

import argparse
import time

import numpy as np

from spinmagic.hamiltonian import sample_syk_couplings, site_pairs
from spinmagic.hilbert import enumerate_basis
from spinmagic.kernels import numba_backend, numpy_backend

BACKENDS = {"numba": numba_backend, "numpy": numpy_backend}


def time_call(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_moments(L, repeat):
    basis = enumerate_basis(L)
    rng = np.random.default_rng(L)
    z = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    amps = z / np.linalg.norm(z)
    args = (amps, basis.configs, basis.rank_table, basis.popcount, L)
    rows = {}
    for name, mod in BACKENDS.items():
        mod.pauli_moment_sums(*args)  # warm up / JIT compile
        rows[name], res = time_call(mod.pauli_moment_sums, *args, repeat=repeat)
        rows[f"{name}_a4"] = res[0]
    assert abs(rows["numba_a4"] - rows["numpy_a4"]) < 1e-10
    return rows


def bench_syk(L, repeat):
    basis = enumerate_basis(L)
    coup = sample_syk_couplings(L, 1.0, seed=0)
    pairs = site_pairs(L)
    pair_a = np.array([p[0] for p in pairs], dtype=np.int64)
    pair_b = np.array([p[1] for p in pairs], dtype=np.int64)
    jmat = coup.pair_matrix() * (4.0 / L**1.5)
    args = (basis.configs, basis.rank_table, basis.popcount, pair_a, pair_b, jmat)
    rows = {}
    ref = None
    for name, mod in BACKENDS.items():
        mod.syk_sector_matrix(*args)
        rows[name], res = time_call(mod.syk_sector_matrix, *args, repeat=repeat)
        if ref is None:
            ref = res
        else:
            assert np.max(np.abs(res - ref)) < 1e-12
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="8,10,12")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"{'kernel':<18}{'L':>4}{'numba [ms]':>14}{'numpy [ms]':>14}{'speedup':>10}")
    for L in sizes:
        rows = bench_moments(L, args.repeat)
        print(
            f"{'pauli moments':<18}{L:>4}{rows['numba'] * 1e3:>14.2f}"
            f"{rows['numpy'] * 1e3:>14.2f}{rows['numpy'] / rows['numba']:>10.1f}"
        )
    for L in sizes:
        rows = bench_syk(L, args.repeat)
        print(
            f"{'syk builder':<18}{L:>4}{rows['numba'] * 1e3:>14.2f}"
            f"{rows['numpy'] * 1e3:>14.2f}{rows['numpy'] / rows['numba']:>10.1f}"
        )


if __name__ == "__main__":
    main()
