"""Divisive change point estimation with permutation significance testing.

Change points are added one at a time: the best single split of the current
segmentation is located by an O(T^2) memoized scan, then validated by a
permutation test that shuffles observations only within existing segments.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._scan import best_split_scan
from .energy import alpha_distance_matrix, as_time_series, check_alpha
from .rng import RandomStream


@dataclass(frozen=True)
class SplitCandidate:
    """Best (tau, kappa) pair for one segment of the current segmentation.

    tau is the 1-based first index of the proposed right block and becomes
    the new boundary if accepted; kappa is the 1-based exclusive end of the
    right block (it may stop short of the segment end).
    """

    segment_index: int
    tau: int
    kappa: int
    statistic: float


@dataclass(frozen=True)
class DivisiveConfig:
    sig_lvl: float = 0.05
    permutations: int = 199  # R, the permutation budget per test
    min_size: int = 30
    alpha: float = 1.0
    k: int | None = None  # fixed number of change points; disables testing
    seed: int = 0
    eps: float = 1e-3  # accepted for interface parity; inert in v1
    half: int = 1000  # accepted for interface parity; inert in v1
    threads: int = 1

    def validate(self):
        if not 0.0 < self.sig_lvl < 1.0:
            raise ValueError(f"sig_lvl must lie in (0, 1), got {self.sig_lvl!r}")
        if self.permutations < 1:
            raise ValueError("permutations must be >= 1")
        if self.min_size < 2:
            raise ValueError("min_size must be >= 2 so within-terms exist on both sides")
        check_alpha(self.alpha)
        if self.k is not None and self.k < 1:
            raise ValueError("k must be >= 1 when given")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass
class DivisiveResult:
    estimates: list  # 1-based boundaries, first 1, last T+1
    k_hat: int  # number of segments
    order_found: list  # [1, T+1] then accepted boundaries in discovery order
    p_values: list  # one per test run (accepted splits plus the final rejected one)
    permutations: list  # permutations actually run per test
    considered_last: int | None  # first insignificant candidate, if any


def _boundaries_to_zero_based(boundaries, t):
    b = np.asarray(boundaries, dtype=np.int64)
    if b.ndim != 1 or b.size < 2:
        raise ValueError("segmentation needs at least the two sentinel boundaries")
    if b[0] != 1 or b[-1] != t + 1:
        raise ValueError(f"boundaries must start at 1 and end at T+1={t + 1}, got {list(b)}")
    if np.any(np.diff(b) <= 0):
        raise ValueError("boundaries must be strictly increasing")
    return b - 1


def best_split(D, boundaries, min_size) -> SplitCandidate | None:
    """Locate the best single split across every segment of a segmentation.

    Maximizes the scaled U-form divergence between [l, tau) and [tau, kappa)
    over all admissible pairs; ties break to the smallest
    (segment_index, tau, kappa). Returns None when no segment is long enough
    to split (the "exhausted" signal for the outer loop).
    """
    D = np.ascontiguousarray(D, dtype=float)
    if min_size < 2:
        raise ValueError("min_size must be >= 2")
    b0 = _boundaries_to_zero_based(boundaries, D.shape[0])
    stat, seg, tau0, kap0 = best_split_scan(D, b0, min_size)
    if seg < 0:
        return None
    return SplitCandidate(int(seg), int(tau0) + 1, int(kap0) + 1, float(stat))


def _segment_permutation(b0, gen):
    perm = np.empty(int(b0[-1]), dtype=np.intp)
    for lo, hi in zip(b0[:-1], b0[1:]):
        perm[lo:hi] = lo + gen.permutation(hi - lo)
    return perm


def _permuted_stat(D, b0, min_size, stream, r):
    gen = stream.substream(r).generator()
    perm = _segment_permutation(b0, gen)
    Dp = D[perm][:, perm]
    stat, _, _, _ = best_split_scan(Dp, b0, min_size)
    return stat


def permutation_test(D, boundaries, observed, cfg, stream):
    """p-value of an observed split via within-segment permutations.

    Each replicate r reorders observations independently inside every
    current segment (stream keyed by r, so results do not depend on worker
    count), reruns the split search, and counts statistics >= the observed
    one. Returns (p_value, permutations_run) with the add-one convention
    p = (1 + count) / (r + 1), so p is never 0.

    The loop stops early under a futility rule: once the over-counter
    exceeds ceil(sig_lvl * (R + 1)) the final p-value can no longer come
    down to sig_lvl, so further replicates cannot change the accept/reject
    outcome. cfg.eps and cfg.half are accepted but inert.
    """
    cfg.validate()
    D = np.ascontiguousarray(D, dtype=float)
    b0 = _boundaries_to_zero_based(boundaries, D.shape[0])
    q0 = observed.statistic
    R = cfg.permutations
    cap = math.ceil(cfg.sig_lvl * (R + 1))  # futile once over > cap
    over = 1
    r_done = 0
    if cfg.threads <= 1:
        for r in range(1, R + 1):
            if _permuted_stat(D, b0, cfg.min_size, stream, r) >= q0:
                over += 1
            r_done = r
            if over > cap:
                break
    else:
        chunk = max(4 * cfg.threads, 16)
        stopped = False
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            r = 1
            while r <= R and not stopped:
                rs = range(r, min(r + chunk, R + 1))
                stats = list(
                    pool.map(lambda i: _permuted_stat(D, b0, cfg.min_size, stream, i), rs)
                )
                # scan in replicate order so the stopping point matches the
                # sequential path exactly
                for i, stat in zip(rs, stats):
                    if stat >= q0:
                        over += 1
                    r_done = i
                    if over > cap:
                        stopped = True
                        break
                r = rs.stop
    return over / (r_done + 1), r_done


def e_divisive(x, cfg: DivisiveConfig | None = None) -> DivisiveResult:
    """Estimate multiple change points by iterated bisection.

    Each iteration locates the best split of the current segmentation and
    keeps it while the permutation test reports p <= sig_lvl; the first
    insignificant candidate ends the search and is reported as
    considered_last. With cfg.k set, exactly min(k, available) splits are
    made with no testing and p_values stays empty. Identical (x, cfg) always
    produce an identical result, whatever cfg.threads is.
    """
    if cfg is None:
        cfg = DivisiveConfig()
    cfg.validate()
    x = as_time_series(x)
    t = x.shape[0]
    D = alpha_distance_matrix(x, cfg.alpha)
    stream = RandomStream(cfg.seed)
    taus: list[int] = []
    p_values: list[float] = []
    perms: list[int] = []
    considered_last = None
    test_index = 0
    while True:
        if cfg.k is not None and len(taus) >= cfg.k:
            break
        bounds = [1] + sorted(taus) + [t + 1]
        cand = best_split(D, bounds, cfg.min_size)
        if cand is None:
            break
        if cfg.k is None:
            p, nrun = permutation_test(D, bounds, cand, cfg, stream.substream(test_index))
            test_index += 1
            p_values.append(p)
            perms.append(nrun)
            if p > cfg.sig_lvl:
                considered_last = cand.tau
                break
        taus.append(cand.tau)
    estimates = [1] + sorted(taus) + [t + 1]
    return DivisiveResult(
        estimates=estimates,
        k_hat=len(estimates) - 1,
        order_found=[1, t + 1] + taus,
        p_values=p_values,
        permutations=perms,
        considered_last=considered_last,
    )
