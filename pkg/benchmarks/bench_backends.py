"""Benchmark the compiled core against the pure-Python fallback.

Times the two hot kernels on representative workloads: the Jacobi
eigensolver across matrix sizes, and full multi-start seesaw searches on the
Tiles projector (the dominant cost of certificates and product-state
enumeration).  Run directly:

    python benchmarks/bench_backends.py
"""

from __future__ import annotations

import time

import numpy as np

from bewitness import _core_py
from bewitness.kernel import BipartiteDims
from bewitness.upb import tiles_upb, padded_real_upb

try:
    from bewitness import _core
except ImportError:
    _core = None


def _time(fn, repeats: int = 3) -> float:
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _random_hermitian(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (m + m.conj().T) / 2.0


def bench_jacobi(backend, sizes=(9, 16, 25, 36), calls: int = 50) -> dict[int, float]:
    out = {}
    for n in sizes:
        m = _random_hermitian(n, seed=n)

        def run():
            for _ in range(calls):
                backend.jacobi_eigh(m)

        out[n] = _time(run) / calls
    return out


def bench_seesaw(backend, p: np.ndarray, dims: BipartiteDims,
                 starts: int = 200, seed: int = 42) -> float:
    rng = np.random.default_rng(seed)

    def run():
        for _ in range(starts):
            psi0 = rng.standard_normal(dims.d_a) + 1j * rng.standard_normal(dims.d_a)
            phi0 = rng.standard_normal(dims.d_b) + 1j * rng.standard_normal(dims.d_b)
            backend.seesaw_extremize(p, dims.d_a, dims.d_b, psi0, phi0,
                                     False, 1e-12, 500)

    return _time(run, repeats=1)


def main() -> None:
    backends = [("python", _core_py)]
    if _core is not None:
        backends.append(("compiled", _core))
    else:
        print("compiled core not available; showing the pure backend only\n")

    print("jacobi_eigh, seconds per call")
    print(f"{'n':>4}  " + "  ".join(f"{name:>10}" for name, _ in backends))
    results = {name: bench_jacobi(impl) for name, impl in backends}
    for n in (9, 16, 25, 36):
        row = "  ".join(f"{results[name][n]:10.2e}" for name, _ in backends)
        print(f"{n:>4}  {row}")

    tiles = tiles_upb()
    p3 = np.ascontiguousarray(tiles.subspace_projector().matrix)
    padded = padded_real_upb(5)
    p5 = np.ascontiguousarray(padded.subspace_projector().matrix)
    print("\nseesaw search, seconds per 200 restarts")
    print(f"{'space':>6}  " + "  ".join(f"{name:>10}" for name, _ in backends))
    for label, p, dims in (("3x3", p3, tiles.dims), ("5x5", p5, padded.dims)):
        row = "  ".join(
            f"{bench_seesaw(impl, p, dims):10.3f}" for _, impl in backends
        )
        print(f"{label:>6}  {row}")

    if _core is not None:
        w_c, _ = _core.jacobi_eigh(_random_hermitian(16, seed=16))
        w_p, _ = _core_py.jacobi_eigh(_random_hermitian(16, seed=16))
        print(f"\nbackend eigenvalue agreement (16x16): {np.max(np.abs(w_c - w_p)):.2e}")


if __name__ == "__main__":
    main()
