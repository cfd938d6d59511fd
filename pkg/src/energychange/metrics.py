"""Partition agreement metrics: Rand index and adjusted Rand index."""

from __future__ import annotations

import numpy as np


def _contingency(u, v):
    u = np.asarray(u).ravel()
    v = np.asarray(v).ravel()
    if u.shape[0] != v.shape[0]:
        raise ValueError(f"membership vectors differ in length: {u.shape[0]} vs {v.shape[0]}")
    if u.shape[0] < 2:
        raise ValueError("need at least 2 observations to compare partitions")
    _, ui = np.unique(u, return_inverse=True)
    _, vi = np.unique(v, return_inverse=True)
    nu = int(ui.max()) + 1
    nv = int(vi.max()) + 1
    table = np.bincount(ui * nv + vi, minlength=nu * nv).reshape(nu, nv)
    return table


def _comb2(x):
    x = np.asarray(x, dtype=np.int64)
    return x * (x - 1) // 2


def rand_index(u, v) -> float:
    """Fraction of observation pairs on which two partitions agree.

    A pair agrees when it is co-clustered in both partitions or separated
    in both. Value in [0, 1]; 1 iff the partitions are identical up to
    relabeling.
    """
    table = _contingency(u, v)
    t = int(table.sum())
    total = _comb2(t)
    same_u = int(_comb2(table.sum(axis=1)).sum())
    same_v = int(_comb2(table.sum(axis=0)).sum())
    same_both = int(_comb2(table).sum())
    agree = total - same_u - same_v + 2 * same_both
    return agree / total


def adjusted_rand_index(u, v) -> float:
    """Rand agreement corrected for chance under the hypergeometric baseline.

    (sum_ij C(n_ij,2) - E) / (M - E) with E = A*B/C(T,2), M = (A+B)/2,
    A and B the within-partition pair counts. 1 for identical partitions,
    0 in expectation for independent ones. When M equals E (both partitions
    degenerate) the value is 1 if the partitions agree and 0 otherwise.
    """
    table = _contingency(u, v)
    t = int(table.sum())
    a = int(_comb2(table.sum(axis=1)).sum())
    b = int(_comb2(table.sum(axis=0)).sum())
    sum_both = int(_comb2(table).sum())
    expected = a * b / _comb2(t)
    mean_ab = (a + b) / 2.0
    if mean_ab == expected:
        return 1.0 if rand_index(u, v) == 1.0 else 0.0
    return (sum_both - expected) / (mean_ab - expected)


def segmentation_to_membership(boundaries, t=None) -> np.ndarray:
    """Expand 1-based segment boundaries into a per-observation label vector.

    boundaries must start at 1 and end at T+1; observations of segment i get
    label i.
    """
    b = np.asarray(boundaries, dtype=np.int64)
    if b.ndim != 1 or b.size < 2 or b[0] != 1 or np.any(np.diff(b) <= 0):
        raise ValueError(f"not a valid boundary vector: {list(np.atleast_1d(b))}")
    total = int(b[-1]) - 1
    if t is not None and t != total:
        raise ValueError(f"boundaries end at {b[-1]} but T={t}")
    labels = np.zeros(total, dtype=np.int64)
    for i, (lo, hi) in enumerate(zip(b[:-1], b[1:])):
        labels[lo - 1 : hi - 1] = i
    return labels
