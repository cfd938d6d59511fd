"""Agglomerative change point estimation by goodness-of-fit maximization.

Starting from a user-supplied contiguous segmentation, adjacent segments are
greedily merged to maximize the sum of scaled divergences between neighboring
segments; the reported segmentation is the recorded step maximizing the
(optionally penalized) fit. All divergence bookkeeping uses the V-form, under
which the constant-time merge identity is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist, pdist

from .energy import as_time_series, check_alpha, e_hat_v, merge_update, q_hat


@dataclass
class AggloResult:
    opt: list  # 1-based boundaries of the best penalized segmentation
    fit: list  # penalized goodness-of-fit, one entry per recorded step
    fit_raw: list  # unpenalized values of the same steps
    progression: list  # per step, the 1-based starts of the active segments
    merged: np.ndarray  # (N-2, 2) merge history; negative = initial segment


def member_from_widths(t, width) -> np.ndarray:
    """Membership vector splitting t observations into blocks of `width`.

    The final block keeps the remainder, so it may be shorter.
    """
    if width < 1:
        raise ValueError("width must be >= 1")
    labels = np.arange(t) // width
    if labels[-1] == 0:
        raise ValueError(f"width {width} leaves a single segment for T={t}")
    return labels


def _member_starts(member, t):
    """Validate contiguity and return 0-based segment starts plus sentinel t."""
    m = np.asarray(member)
    if m.ndim != 1 or m.shape[0] != t:
        raise ValueError(f"member must be a length-{t} vector, got shape {m.shape}")
    change = np.nonzero(m[1:] != m[:-1])[0] + 1
    starts = np.concatenate(([0], change, [t]))
    labels = m[starts[:-1]]
    if np.unique(labels).size != labels.size:
        raise ValueError(
            "member is not contiguous: a segment label reappears after a change"
        )
    if labels.size < 2:
        raise ValueError("at least 2 initial segments are required")
    return starts


def _block_pair_sums(x, starts, alpha):
    """n x n table of scaled V-form divergences between initial segments.

    Works from per-block distance sums, so the full T x T matrix is never
    materialized; total work is still O(T^2).
    """
    n = starts.size - 1
    blocks = [x[starts[i] : starts[i + 1]] for i in range(n)]
    sizes = np.diff(starts).astype(float)
    within = np.empty(n)
    for i, blk in enumerate(blocks):
        if blk.shape[0] < 2:
            within[i] = 0.0
        else:
            within[i] = 2.0 * float(np.power(pdist(blk), alpha).sum())
    q = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            between = float(np.power(cdist(blocks[i], blocks[j]), alpha).sum())
            ni, nj = sizes[i], sizes[j]
            e = 2.0 * between / (ni * nj) - within[i] / ni**2 - within[j] / nj**2
            q[i, j] = q[j, i] = ni * nj / (ni + nj) * e
    return q


class _MergeState:
    """Active segmentation plus its pairwise scaled-divergence table.

    Kept separate from e_agglo so tests can drive merges one step at a time
    and compare the maintained table against from-scratch recomputation.
    """

    def __init__(self, starts, q):
        self.starts = list(int(s) for s in starts[:-1])
        self.t = int(starts[-1])
        self.sizes = np.diff(starts).astype(np.int64)
        self.q = np.array(q, dtype=float)
        # merge-history codes: negative = initial segment, positive = step id
        self.codes = [-(i + 1) for i in range(len(self.starts))]
        self.step = 0
        self.gof = self._gof_from_table()

    @property
    def nseg(self):
        return len(self.starts)

    def _gof_from_table(self):
        n = self.nseg
        idx = np.arange(n)
        return float(self.q[idx, (idx + 1) % n].sum())

    def candidate_gofs(self):
        """Goodness of fit after merging pair (i, i+1), for every i.

        Only time-adjacent pairs are candidates; the wrap pair (last, first)
        is not contiguous and is never merged, although the fit sum itself
        is circular.
        """
        n = self.nseg
        i = np.arange(n - 1)
        p = (i - 1) % n
        s = (i + 2) % n
        m1 = self.sizes[i]
        m2 = self.sizes[i + 1]
        e12 = self.q[i, i + 1]
        qp = merge_update(self.q[i, p], self.q[i + 1, p], e12, m1, m2, self.sizes[p])
        qs = merge_update(self.q[i, s], self.q[i + 1, s], e12, m1, m2, self.sizes[s])
        return self.gof - self.q[p, i] - e12 - self.q[i + 1, s] + qp + qs

    def merge(self, i, new_gof):
        """Merge segments i and i+1, updating divergences in O(n)."""
        n = self.nseg
        others = np.array([t for t in range(n) if t != i and t != i + 1], dtype=np.intp)
        if others.size:
            qnew = merge_update(
                self.q[i, others],
                self.q[i + 1, others],
                self.q[i, i + 1],
                self.sizes[i],
                self.sizes[i + 1],
                self.sizes[others],
            )
        self.step += 1
        record = (self.codes[i], self.codes[i + 1])
        self.codes[i] = self.step
        del self.codes[i + 1]
        del self.starts[i + 1]
        self.sizes[i] += self.sizes[i + 1]
        self.sizes = np.delete(self.sizes, i + 1)
        self.q = np.delete(np.delete(self.q, i + 1, axis=0), i + 1, axis=1)
        if others.size:
            keep = others - (others > i + 1)  # positions after row/col removal
            self.q[i, keep] = qnew
            self.q[keep, i] = qnew
        self.q[i, i] = 0.0
        self.gof = float(new_gof)
        return record

    def boundaries_1based(self):
        return [s + 1 for s in self.starts]

    def interior_1based(self):
        return [s + 1 for s in self.starts[1:]]


def gof(segments, D) -> float:
    """Goodness-of-fit: scaled V-form divergences between adjacent segments.

    Adjacency is circular (the last segment also pairs with the first), so
    with exactly two segments the single pair is counted twice.
    """
    if len(segments) < 2:
        raise ValueError("goodness of fit needs at least 2 segments")
    total = 0.0
    n = len(segments)
    for i in range(n):
        a = np.asarray(segments[i])
        b = np.asarray(segments[(i + 1) % n])
        total += q_hat(e_hat_v(D, a, b), a.size, b.size)
    return total


def _mean_gap(cps):
    if len(cps) < 2:
        return 0.0
    d = np.diff(np.sort(np.asarray(cps, dtype=float)))
    return float(d.mean())


def apply_penalty(fit_raw, cps_per_step, penalty):
    """Add penalty(change points) to each recorded fit value.

    penalty is one of "none", "neg_count", "mean_gap", a per-step sequence
    of additive values, or a callable receiving the sorted change point
    locations of a step. "none" is the identity.
    """
    if len(fit_raw) != len(cps_per_step):
        raise ValueError("fit_raw and cps_per_step must have equal length")
    if penalty is None or penalty == "none":
        return [float(f) for f in fit_raw]
    if penalty == "neg_count":
        return [float(f) - len(cp) for f, cp in zip(fit_raw, cps_per_step)]
    if penalty == "mean_gap":
        return [float(f) + _mean_gap(cp) for f, cp in zip(fit_raw, cps_per_step)]
    if callable(penalty):
        return [float(f) + float(penalty(sorted(cp))) for f, cp in zip(fit_raw, cps_per_step)]
    table = np.asarray(penalty, dtype=float)
    if table.ndim != 1 or table.size != len(fit_raw):
        raise ValueError(
            f"penalty table must hold one value per recorded step ({len(fit_raw)}), "
            f"got shape {table.shape}"
        )
    return [float(f) + float(p) for f, p in zip(fit_raw, table)]


def e_agglo(x, member, alpha=1.0, penalty="none") -> AggloResult:
    """Estimate change points by greedy merging of an initial segmentation.

    member assigns each observation to a contiguous initial segment. The
    adjacent pair whose merge maximizes the fit is merged until two segments
    remain; the reported segmentation is the recorded step with the largest
    penalized fit. At least one change point is assumed present, so the
    single-segment solution is never produced.
    """
    x = as_time_series(x)
    a = check_alpha(alpha)
    t = x.shape[0]
    starts = _member_starts(member, t)
    q = _block_pair_sums(x, starts, a)
    state = _MergeState(starts, q)
    fit_raw = [state.gof]
    progression = [state.boundaries_1based()]
    cps = [state.interior_1based()]
    merged = []
    while state.nseg > 2:
        cand = state.candidate_gofs()
        i = int(np.argmax(cand))  # first argmax: smallest left start wins ties
        merged.append(state.merge(i, cand[i]))
        fit_raw.append(state.gof)
        progression.append(state.boundaries_1based())
        cps.append(state.interior_1based())
    fit = apply_penalty(fit_raw, cps, penalty)
    best = int(np.argmax(fit))
    opt = progression[best] + [t + 1]
    return AggloResult(
        opt=opt,
        fit=fit,
        fit_raw=[float(f) for f in fit_raw],
        progression=progression,
        merged=np.array(merged, dtype=np.int64).reshape(len(merged), 2),
    )
