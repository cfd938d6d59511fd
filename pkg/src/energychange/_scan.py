"""Memoized single-split scan over a distance matrix.

Block sums come from a column prefix-sum table, so every (tau, kappa)
candidate costs O(1) after an O(T^2) setup; the jitted loop keeps the whole
scan at O(T^2) per call.
"""

from __future__ import annotations

import numpy as np
from numba import njit


def column_prefix_sums(D: np.ndarray) -> np.ndarray:
    """cs[t, j] = sum of D[i, j] for i < t; shape (T+1, T)."""
    t = D.shape[0]
    cs = np.zeros((t + 1, t))
    np.cumsum(D, axis=0, out=cs[1:])
    return cs


@njit(cache=True, nogil=True)
def _scan_segments(cs, bounds, m):
    """Maximize the scaled U-form divergence over all admissible splits.

    bounds are 0-based segment starts plus the final sentinel T. For a
    segment [lo, hi) the candidates are tau in [lo+m, hi-m] (first index of
    the right block) and kappa in [tau+m, hi] (exclusive right end). Strict
    improvement only, so ties resolve to the smallest (segment, tau, kappa).
    """
    best = -np.inf
    bseg = -1
    btau = -1
    bkap = -1
    nseg = bounds.shape[0] - 1
    for s in range(nseg):
        lo = bounds[s]
        hi = bounds[s + 1]
        if hi - lo < 2 * m:
            continue
        wl = 0.0  # within-sum of [lo, tau), unordered pairs
        for t in range(lo + 1, lo + m):
            wl += cs[t, t] - cs[lo, t]
        for tau in range(lo + m, hi - m + 1):
            n = tau - lo
            b = 0.0  # cross-sum [lo, tau) x [tau, kappa)
            wr = 0.0  # within-sum of [tau, kappa), unordered pairs
            for kap in range(tau + 1, hi + 1):
                j = kap - 1
                b += cs[tau, j] - cs[lo, j]
                wr += cs[j, j] - cs[tau, j]
                mm = kap - tau
                if mm >= m:
                    e = (
                        2.0 * b / (n * mm)
                        - wl / (n * (n - 1) * 0.5)
                        - wr / (mm * (mm - 1) * 0.5)
                    )
                    q = (n * mm) / (n + mm) * e
                    if q > best:
                        best = q
                        bseg = s
                        btau = tau
                        bkap = kap
            wl += cs[tau, tau] - cs[lo, tau]
    return best, bseg, btau, bkap


def best_split_scan(D, bounds0, min_size):
    """Run the scan; returns (stat, seg, tau, kappa) with 0-based indices.

    seg is -1 when no segment admits a split.
    """
    cs = column_prefix_sums(D)
    bounds = np.asarray(bounds0, dtype=np.int64)
    return _scan_segments(cs, bounds, min_size)
