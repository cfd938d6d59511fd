"""Pairwise alpha-distances and between-sample energy divergences."""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import pdist, squareform


def as_time_series(data) -> np.ndarray:
    """Coerce input to a (T, d) float array of finite values.

    A 1-d input becomes a single column; rows are time order. Non-finite
    entries are rejected with the offending row named, since every
    downstream statistic assumes complete data.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise ValueError(f"time series must be 1-d or 2-d, got shape {x.shape}")
    if x.shape[0] < 1 or x.shape[1] < 1:
        raise ValueError(f"time series must be non-empty, got shape {x.shape}")
    bad = ~np.isfinite(x)
    if bad.any():
        row = int(np.nonzero(bad.any(axis=1))[0][0])
        raise ValueError(
            f"non-finite value in row {row}; impute or drop missing data first"
        )
    return x


def check_alpha(alpha) -> float:
    """Validate the distance exponent; must lie in (0, 2]."""
    a = float(alpha)
    if not 0.0 < a <= 2.0:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha!r}")
    return a


def alpha_distance_matrix(x, alpha=1.0) -> np.ndarray:
    """Symmetric T x T matrix of pairwise Euclidean distances to power alpha.

    Computed once per analysis and shared read-only by every statistic.
    """
    x = as_time_series(x)
    a = check_alpha(alpha)
    if x.shape[0] == 1:
        return np.zeros((1, 1))
    d = squareform(pdist(x))
    if a != 1.0:
        np.power(d, a, out=d)
    return d


def _index_sets(D, a, b):
    a = np.asarray(a, dtype=np.intp).ravel()
    b = np.asarray(b, dtype=np.intp).ravel()
    if a.size == 0 or b.size == 0:
        raise ValueError("index sets must be non-empty")
    t = D.shape[0]
    for name, s in (("a", a), ("b", b)):
        if s.min() < 0 or s.max() >= t:
            raise ValueError(f"index set {name!r} out of range [0, {t})")
        if np.unique(s).size != s.size:
            raise ValueError(f"index set {name!r} contains duplicate indices")
    if np.intersect1d(a, b).size:
        raise ValueError("index sets overlap; samples must be disjoint")
    return a, b


def e_hat_u(D, a, b) -> float:
    """Sample energy divergence between two disjoint index sets, U-form.

    Within-sample terms average the C(n, 2) strictly off-diagonal distances;
    a singleton set contributes 0. This normalization backs the divisive
    split statistic.
    """
    a, b = _index_sets(D, a, b)
    n, m = a.size, b.size
    e = 2.0 * float(D[np.ix_(a, b)].sum()) / (n * m)
    if n > 1:
        e -= float(D[np.ix_(a, a)].sum()) / (n * (n - 1))
    if m > 1:
        e -= float(D[np.ix_(b, b)].sum()) / (m * (m - 1))
    return e


def e_hat_v(D, a, b) -> float:
    """Sample energy divergence, V-form (1/n^2 within terms, diagonal kept).

    The constant-time merge identity (`merge_update`) is exact under this
    normalization, so the agglomerative path uses it throughout.
    """
    a, b = _index_sets(D, a, b)
    n, m = a.size, b.size
    e = 2.0 * float(D[np.ix_(a, b)].sum()) / (n * m)
    e -= float(D[np.ix_(a, a)].sum()) / (n * n)
    e -= float(D[np.ix_(b, b)].sum()) / (m * m)
    return e


def q_hat(e, n, m):
    """Scale a divergence by n*m/(n + m); identical for U- and V-form inputs."""
    if n < 1 or m < 1:
        raise ValueError("sample sizes must be >= 1")
    return (n * m) / (n + m) * e


def merge_update(e13, e23, e12, m1, m2, m3):
    """Scaled V-form divergence between a merged pair and a third segment.

    Inputs are the scaled divergences among disjoint segments C1, C2, C3
    (sizes m1, m2, m3); the return value equals the directly computed scaled
    V-form divergence between C1 u C2 and C3 exactly. Broadcasts over numpy
    arrays, which is how the agglomerative engine updates whole rows.
    """
    if np.any(np.asarray(m1) < 1) or np.any(np.asarray(m2) < 1) or np.any(np.asarray(m3) < 1):
        raise ValueError("segment sizes must be >= 1")
    tot = m1 + m2 + m3
    return ((m1 + m3) * e13 + (m2 + m3) * e23 - m3 * e12) / tot
