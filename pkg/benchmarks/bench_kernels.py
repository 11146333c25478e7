"""Benchmark the numba kernels against the pure-numpy fallback.

Run:  python3 benchmarks/bench_kernels.py [--repeat 3]

Workloads mirror the package hot paths: the propagator table behind
maximal fields (many times x many points), the per-point table behind
linearized/adapted-time evaluation, and the Hardy-Littlewood scan.
The same benchmark runs regardless of CTDISP_NO_NUMBA; the numba column
is skipped when that path is unavailable.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ctdisp import _kernels_numpy
from ctdisp.backends import numba_available

if numba_available():
    from ctdisp import _kernels_numba
else:
    _kernels_numba = None


def _time(fn, *args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def make_workloads():
    rng = np.random.default_rng(0)

    n_t, n_k, n_x = 256, 4096, 257
    xi = np.linspace(-400.0, -350.0, n_k)
    coeffs = np.ascontiguousarray(
        (rng.normal(size=(n_t, n_k)) + 1j * rng.normal(size=(n_t, n_k)))
        * np.exp(-np.linspace(0, 5, n_k))[None, :]
    )
    xs = np.linspace(0.0, 1.0, n_x)

    pp_coeffs = np.ascontiguousarray(
        rng.normal(size=(n_x, n_k)) + 1j * rng.normal(size=(n_x, n_k))
    )

    hl_vals = np.abs(rng.normal(size=4001))

    return [
        ("evolution_table (256 x 4096 x 257)", "evolution_table", (xi, coeffs, xs)),
        ("per_point_table (257 x 4096)", "per_point_table", (xi, pp_coeffs, xs)),
        ("hl_maximal (n = 4001)", "hl_maximal", (hl_vals, 0.01)),
    ]


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    workloads = make_workloads()
    print(f"{'workload':42s} {'numpy (s)':>10s} {'numba (s)':>10s} {'speedup':>8s}")
    for label, name, wargs in workloads:
        t_np = _time(getattr(_kernels_numpy, name), *wargs, repeat=args.repeat)
        if _kernels_numba is not None:
            fn = getattr(_kernels_numba, name)
            fn(*wargs)  # jit warm-up outside the timed region
            t_nb = _time(fn, *wargs, repeat=args.repeat)
            ref = getattr(_kernels_numpy, name)(*wargs)
            got = fn(*wargs)
            assert np.allclose(ref, got, rtol=1e-9, atol=1e-12)
            print(f"{label:42s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.2f}x")
        else:
            print(f"{label:42s} {t_np:10.4f} {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
