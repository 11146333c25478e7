"""numba-compiled grid kernels.

Loop bodies mirror ``_kernels_numpy`` exactly; parallelism is over
independent output cells only (each cell is accumulated serially by one
iteration), so results do not depend on the thread schedule.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(cache=True, parallel=True)
def evolution_table(xi, coeffs, xs):  # pragma: no cover - exercised via dispatch
    # phase-matrix chunks are filled in parallel, the contraction itself
    # goes through BLAS (np.dot); chunk size fixed for reproducibility
    n_r, n_k = coeffs.shape
    n_x = xs.shape[0]
    out = np.zeros((n_r, n_x), np.complex128)
    chunk = (1 << 21) // max(1, n_x)
    if chunk < 1:
        chunk = 1
    for k0 in range(0, n_k, chunk):
        k1 = min(k0 + chunk, n_k)
        phase = np.empty((k1 - k0, n_x), np.complex128)
        for k in prange(k1 - k0):
            v = xi[k0 + k]
            for j in range(n_x):
                ph = v * xs[j]
                phase[k, j] = complex(np.cos(ph), np.sin(ph))
        out += np.dot(np.ascontiguousarray(coeffs[:, k0:k1]), phase)
    return out


@njit(cache=True, parallel=True)
def per_point_table(xi, coeffs, xs):  # pragma: no cover - exercised via dispatch
    n_x = xs.shape[0]
    n_k = xi.shape[0]
    out = np.empty(n_x, np.complex128)
    for j in prange(n_x):
        x = xs[j]
        acc = 0.0 + 0.0j
        for k in range(n_k):
            ph = x * xi[k]
            acc += coeffs[j, k] * complex(np.cos(ph), np.sin(ph))
        out[j] = acc
    return out


@njit(cache=True, parallel=True)
def hl_maximal(values, spacing):  # pragma: no cover - exercised via dispatch
    n = values.shape[0]
    v = np.empty(n, np.float64)
    for i in range(n):
        v[i] = abs(values[i])
    prefix = np.empty(n + 1, np.float64)
    prefix[0] = 0.0
    for i in range(n):
        prefix[i + 1] = prefix[i] + v[i]
    out = np.empty(n, np.float64)
    for i in prange(n):
        best = v[i]
        for k in range(1, n):
            lo = i - k
            if lo < 0:
                lo = 0
            hi = i + k
            if hi > n - 1:
                hi = n - 1
            mean = (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1)
            if mean > best:
                best = mean
        out[i] = best
    return out
