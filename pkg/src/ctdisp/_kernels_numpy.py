"""Pure-numpy reference implementations of the hot grid kernels.

These are the fallback path selected by ``CTDISP_NO_NUMBA=1`` (or when
numba is unavailable) and the ground truth the numba kernels are tested
against.  Summation orders are fixed, so results are reproducible for a
fixed configuration.
"""

from __future__ import annotations

import numpy as np

# elements per phase-matrix chunk; fixed so outputs are configuration-stable
_CHUNK_ELEMS = 1 << 21


def evolution_table(xi: np.ndarray, coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Rows of quadrature sums: out[r, j] = sum_k coeffs[r, k] e^{i xs[j] xi[k]}.

    coeffs carries the weighted profile and the per-row time/damping
    multipliers; the e^{i x xi} synthesis factor is shared across rows.
    """
    n_x = xs.shape[0]
    n_r = coeffs.shape[0]
    out = np.zeros((n_r, n_x), dtype=np.complex128)
    chunk = max(1, _CHUNK_ELEMS // max(1, n_x))
    for k0 in range(0, xi.shape[0], chunk):
        sl = slice(k0, min(k0 + chunk, xi.shape[0]))
        phase = np.exp(1j * np.outer(xi[sl], xs))
        out += coeffs[:, sl] @ phase
    return out


def per_point_table(xi: np.ndarray, coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Diagonal variant: out[j] = sum_k coeffs[j, k] e^{i xs[j] xi[k]}."""
    n_x = xs.shape[0]
    out = np.empty(n_x, dtype=np.complex128)
    chunk = max(1, _CHUNK_ELEMS // max(1, xi.shape[0]))
    for j0 in range(0, n_x, chunk):
        sl = slice(j0, min(j0 + chunk, n_x))
        phase = np.exp(1j * np.outer(xs[sl], xi))
        out[sl] = np.sum(coeffs[sl] * phase, axis=1)
    return out


def hl_maximal(values: np.ndarray, spacing: float) -> np.ndarray:
    """Centered Hardy-Littlewood maximal scan over grid-aligned radii.

    out[i] = max over k >= 0 of the mean of values on the window
    [i - k, i + k] clipped to the grid; k = 0 recovers |values| itself.
    """
    v = np.abs(np.asarray(values, dtype=np.float64))
    n = v.shape[0]
    prefix = np.concatenate(([0.0], np.cumsum(v)))
    idx = np.arange(n)
    best = v.copy()
    for k in range(1, n):
        lo = np.maximum(idx - k, 0)
        hi = np.minimum(idx + k, n - 1)
        means = (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1)
        np.maximum(best, means, out=best)
    return best
