"""Benchmark the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Times the hermitian eigensolver across dimensions and the ensemble
rotation sweep that drives the entanglement-of-formation search.
"""

import argparse
import time

import numpy as np

from entkit import kernels, measures, states


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_eigh(backend, dims, repeats):
    rng = np.random.default_rng(0)
    out = {}
    for n in dims:
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = (g + g.conj().T) / 2
        out[n] = _time(lambda: backend.eigh(h), repeats)
    return out


def bench_sweep(backend, repeats):
    w = states.werner_state(0.7)
    base = measures._spectral_rows(w)
    rng = np.random.default_rng(1)
    g = rng.standard_normal((16, 4)) + 1j * rng.standard_normal((16, 4))
    q, _ = np.linalg.qr(g)
    start = np.ascontiguousarray(q @ base)

    def run():
        rows = start.copy()
        _, ew = backend.column_scores(rows, 2, 2)
        for _ in range(4):
            backend.eof_sweep(rows, ew, 2, 2)

    return _time(run, repeats)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    names = kernels.available_backends()
    backends = {name: kernels.get_backend(name) for name in names}
    dims = (4, 8, 16, 32, 64)

    print(f"backends: {', '.join(names)} (active: {kernels.BACKEND})")
    print()
    print("hermitian eigensolver (best of {} runs, seconds)".format(args.repeats))
    header = "  dim  " + "".join(f"{n:>12}" for n in names)
    print(header)
    results = {name: bench_eigh(backends[name], dims, args.repeats) for name in names}
    for n in dims:
        row = f"  {n:<5}" + "".join(f"{results[name][n]:>12.2e}" for name in names)
        print(row)
    if "compiled" in names:
        print("  (ratio python/compiled: "
              + ", ".join(
                  f"dim {n}: {results['python'][n] / results['compiled'][n]:.1f}x"
                  for n in dims
              )
              + ")")

    print()
    print("ensemble rotation sweep, 16 members of a two-qubit state (4 passes)")
    for name in names:
        print(f"  {name:<10} {bench_sweep(backends[name], args.repeats):.2e} s")


if __name__ == "__main__":
    main()
