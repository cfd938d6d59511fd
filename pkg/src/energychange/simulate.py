"""Seeded generators for every simulation scenario used in the studies.

Univariate and multivariate block scenarios draw each block from its own
substream, so a block's values depend only on (seed, block index, family)
and not on the other blocks' parameters. The spatio-temporal point process
draws a Poisson count per time interval, assigns mixture components
multinomially, and sorts arrivals by time.
"""

from __future__ import annotations

import csv
import io as _io
from dataclasses import dataclass, field

import numpy as np

from .agglo import e_agglo, member_from_widths
from .divisive import DivisiveConfig, e_divisive
from .metrics import rand_index, segmentation_to_membership
from .rng import RandomStream

__all__ = [
    "Block",
    "Scenario",
    "RandomStream",
    "mean_change",
    "variance_change",
    "tail_change",
    "mv_mean",
    "mv_correlation",
    "mv_covariance",
    "mv_tail",
    "four_block_gaussian",
    "stpp_scenario",
    "generate",
    "scenario_to_config",
    "scenario_from_config",
    "study_cells",
    "run_study",
    "study_report_csv",
]


@dataclass
class Block:
    """One stationary stretch of a block scenario."""

    length: int
    family: str  # "normal" | "t" | "mvnormal" | "mvt"
    mean: object = 0.0  # scalar, or vector for multivariate families
    sd: float = 1.0  # univariate scale
    df: float | None = None  # degrees of freedom for t families
    cov: object = None  # covariance (scale matrix for mvt)


@dataclass
class Scenario:
    """A generatable data model: either a list of blocks or a point process."""

    kind: str
    blocks: list = field(default_factory=list)
    # spatio-temporal Poisson process fields
    rate: float | None = None
    breaks: tuple | None = None
    component_means: list | None = None
    component_covs: list | None = None
    weights: object = None  # (intervals, components) mixture weights


def _equal_thirds(t):
    a = t // 3
    return [a, a, t - 2 * a]


def mean_change(t, mu, sd=1.0) -> Scenario:
    """Three equal blocks: N(0,1), N(mu, sd), N(0,1)."""
    l1, l2, l3 = _equal_thirds(t)
    return Scenario(
        "mean_change",
        [
            Block(l1, "normal", 0.0, 1.0),
            Block(l2, "normal", float(mu), float(sd)),
            Block(l3, "normal", 0.0, 1.0),
        ],
    )


def variance_change(t, var) -> Scenario:
    """Three equal blocks: N(0,1), N(0, var), N(0,1)."""
    l1, l2, l3 = _equal_thirds(t)
    return Scenario(
        "variance_change",
        [
            Block(l1, "normal", 0.0, 1.0),
            Block(l2, "normal", 0.0, float(np.sqrt(var))),
            Block(l3, "normal", 0.0, 1.0),
        ],
    )


def tail_change(t, df) -> Scenario:
    """Three equal blocks: N(0,1), t_df(0,1), N(0,1)."""
    l1, l2, l3 = _equal_thirds(t)
    return Scenario(
        "tail_change",
        [
            Block(l1, "normal", 0.0, 1.0),
            Block(l2, "t", 0.0, 1.0, df=float(df)),
            Block(l3, "normal", 0.0, 1.0),
        ],
    )


def mv_mean(t, mu, d=2) -> Scenario:
    """Three equal d-variate blocks with the middle mean shifted to (mu,..,mu)."""
    l1, l2, l3 = _equal_thirds(t)
    eye = np.eye(d)
    zero = np.zeros(d)
    shift = np.full(d, float(mu))
    return Scenario(
        "mv_mean",
        [
            Block(l1, "mvnormal", zero, cov=eye),
            Block(l2, "mvnormal", shift, cov=eye),
            Block(l3, "mvnormal", zero, cov=eye),
        ],
    )


def _corr_matrix(d, rho):
    s = np.full((d, d), float(rho))
    np.fill_diagonal(s, 1.0)
    return s


def mv_correlation(t, rho, d=2) -> Scenario:
    """Three equal d-variate blocks; the middle one gets off-diagonal rho."""
    l1, l2, l3 = _equal_thirds(t)
    eye = np.eye(d)
    zero = np.zeros(d)
    return Scenario(
        "mv_correlation",
        [
            Block(l1, "mvnormal", zero, cov=eye),
            Block(l2, "mvnormal", zero, cov=_corr_matrix(d, rho)),
            Block(l3, "mvnormal", zero, cov=eye),
        ],
    )


def mv_covariance(t=750, rho=0.9, d=3) -> Scenario:
    """Trivariate covariance-change scenario; marginals stay standard normal."""
    l1, l2, l3 = _equal_thirds(t)
    eye = np.eye(d)
    zero = np.zeros(d)
    return Scenario(
        "mv_covariance",
        [
            Block(l1, "mvnormal", zero, cov=eye),
            Block(l2, "mvnormal", zero, cov=_corr_matrix(d, rho)),
            Block(l3, "mvnormal", zero, cov=eye),
        ],
    )


def mv_tail(t=750, df=2, d=2) -> Scenario:
    """Bivariate normal / heavy-tailed t / normal blocks with identity scale."""
    l1, l2, l3 = _equal_thirds(t)
    eye = np.eye(d)
    zero = np.zeros(d)
    return Scenario(
        "mv_tail",
        [
            Block(l1, "mvnormal", zero, cov=eye),
            Block(l2, "mvt", zero, df=float(df), cov=eye),
            Block(l3, "mvnormal", zero, cov=eye),
        ],
    )


def four_block_gaussian() -> Scenario:
    """Univariate four-block scenario with mean and scale changes.

    Block scales follow the generating code (sd 3 and sd 4), which differs
    from the looser prose description of the same setup.
    """
    return Scenario(
        "mean_change",
        [
            Block(100, "normal", 0.0, 1.0),
            Block(100, "normal", 0.0, 3.0),
            Block(100, "normal", 2.0, 1.0),
            Block(100, "normal", 2.0, 4.0),
        ],
    )


def stpp_scenario(rate=1500.0) -> Scenario:
    """Inhomogeneous spatio-temporal Poisson process over [0, 7].

    Spatial intensity is a 3-component Gaussian mixture whose weights change
    at times 1, 3 and 4.5.
    """
    return Scenario(
        "stpp",
        rate=float(rate),
        breaks=(0.0, 1.0, 3.0, 4.5, 7.0),
        component_means=[
            np.array([-7.0, -7.0]),
            np.array([0.0, 0.0]),
            np.array([5.5, 0.0]),
        ],
        component_covs=[
            25.0 * np.eye(2),
            np.array([[9.0, 0.0], [0.0, 1.0]]),
            np.array([[9.0, 0.9], [0.9, 9.0]]),
        ],
        weights=np.array(
            [
                [1 / 3, 1 / 3, 1 / 3],
                [0.2, 0.5, 0.3],
                [0.35, 0.3, 0.35],
                [0.2, 0.3, 0.5],
            ]
        ),
    )


def _cholesky(cov):
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError(f"covariance must be square, got shape {cov.shape}")
    if not np.allclose(cov, cov.T):
        raise ValueError("covariance must be symmetric")
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise ValueError("covariance matrix is not positive definite") from None


def _draw_block(block: Block, gen) -> np.ndarray:
    n = int(block.length)
    if n < 1:
        raise ValueError("block length must be >= 1")
    fam = block.family
    if fam == "normal":
        return (float(block.mean) + float(block.sd) * gen.standard_normal(n))[:, None]
    if fam == "t":
        z = gen.standard_normal(n)
        w = gen.chisquare(block.df, n) / block.df
        return (float(block.mean) + float(block.sd) * z / np.sqrt(w))[:, None]
    if fam == "mvnormal":
        L = _cholesky(block.cov)
        z = gen.standard_normal((n, L.shape[0]))
        return np.asarray(block.mean, dtype=float) + z @ L.T
    if fam == "mvt":
        L = _cholesky(block.cov)
        z = gen.standard_normal((n, L.shape[0]))
        w = gen.chisquare(block.df, n) / block.df
        return np.asarray(block.mean, dtype=float) + (z @ L.T) / np.sqrt(w)[:, None]
    raise ValueError(f"unknown block family {fam!r}")


def _generate_blocks(sc: Scenario, rng: RandomStream):
    parts = [_draw_block(b, rng.substream(i).generator()) for i, b in enumerate(sc.blocks)]
    widths = {p.shape[1] for p in parts}
    if len(widths) != 1:
        raise ValueError("all blocks must have the same dimension")
    data = np.vstack(parts)
    lengths = [b.length for b in sc.blocks]
    truth = [1] + [int(v) + 1 for v in np.cumsum(lengths)]
    return data, truth


def _generate_stpp(sc: Scenario, rng: RandomStream):
    breaks = np.asarray(sc.breaks, dtype=float)
    if breaks.ndim != 1 or breaks.size < 2 or np.any(np.diff(breaks) <= 0):
        raise ValueError("breaks must be strictly increasing times")
    weights = np.asarray(sc.weights, dtype=float)
    n_int = breaks.size - 1
    n_comp = len(sc.component_means)
    if weights.shape != (n_int, n_comp):
        raise ValueError(f"weights must be ({n_int}, {n_comp}), got {weights.shape}")
    if np.any(np.abs(weights.sum(axis=1) - 1.0) > 1e-9):
        raise ValueError("mixture weights must sum to 1 within each interval")
    chols = [_cholesky(c) for c in sc.component_covs]
    rows = []
    counts = []
    for i in range(n_int):
        gen = rng.substream(i).generator()
        lo, hi = breaks[i], breaks[i + 1]
        count = int(gen.poisson(sc.rate * (hi - lo)))
        counts.append(count)
        if count == 0:
            continue
        comp_counts = gen.multinomial(count, weights[i])
        coords = []
        for c, k in enumerate(comp_counts):
            if k == 0:
                continue
            z = gen.standard_normal((k, 2))
            coords.append(np.asarray(sc.component_means[c], dtype=float) + z @ chols[c].T)
        coords = np.vstack(coords)
        times = gen.uniform(lo, hi, count)
        order = np.argsort(times, kind="stable")
        rows.append(np.column_stack([times[order], coords[order]]))
    data = np.vstack(rows)
    truth = [1] + [int(v) + 1 for v in np.cumsum(counts)]
    return data, truth


def generate(sc: Scenario, rng: RandomStream):
    """Draw one realization of a scenario.

    Returns (data, truth): data is the (T, d) series and truth the 1-based
    block boundaries, starting at 1 and ending at T+1. For the point
    process, data columns are (time, x, y) with rows sorted by time, and
    truth marks the rows where the time breakpoints fall.
    """
    if sc.kind == "stpp" or sc.rate is not None:
        return _generate_stpp(sc, rng)
    if not sc.blocks:
        raise ValueError("scenario has no blocks to generate")
    return _generate_blocks(sc, rng)


# -- plain-text scenario config -------------------------------------------

def _fmt_vector(v):
    return ",".join(repr(float(x)) for x in np.atleast_1d(np.asarray(v, dtype=float)))


def _fmt_matrix(m):
    m = np.asarray(m, dtype=float)
    return ";".join(",".join(repr(float(x)) for x in row) for row in m)


def _parse_matrix(text):
    return np.array([[float(x) for x in row.split(",")] for row in text.split(";")])


def scenario_to_config(sc: Scenario) -> str:
    """Serialize a scenario as one `key = value` line per field."""
    lines = [f"kind = {sc.kind}"]
    for i, b in enumerate(sc.blocks):
        p = f"block.{i}"
        lines.append(f"{p}.length = {int(b.length)}")
        lines.append(f"{p}.family = {b.family}")
        lines.append(f"{p}.mean = {_fmt_vector(b.mean)}")
        if b.family in ("normal", "t"):
            lines.append(f"{p}.sd = {float(b.sd)!r}")
        if b.df is not None:
            lines.append(f"{p}.df = {float(b.df)!r}")
        if b.cov is not None:
            lines.append(f"{p}.cov = {_fmt_matrix(b.cov)}")
    if sc.rate is not None:
        lines.append(f"rate = {float(sc.rate)!r}")
        lines.append(f"breaks = {_fmt_vector(sc.breaks)}")
        for i, (m, c) in enumerate(zip(sc.component_means, sc.component_covs)):
            lines.append(f"component.{i}.mean = {_fmt_vector(m)}")
            lines.append(f"component.{i}.cov = {_fmt_matrix(c)}")
        for i, row in enumerate(np.asarray(sc.weights, dtype=float)):
            lines.append(f"weights.{i} = {_fmt_vector(row)}")
    return "\n".join(lines) + "\n"


def scenario_from_config(text: str) -> Scenario:
    """Parse the `key = value` form produced by scenario_to_config."""
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        fields[key.strip()] = value.strip()
    if "kind" not in fields:
        raise ValueError("scenario config is missing 'kind'")
    sc = Scenario(fields.pop("kind"))
    blocks = {}
    components = {}
    weights = {}
    for key, value in fields.items():
        parts = key.split(".")
        if parts[0] == "block":
            blocks.setdefault(int(parts[1]), {})[parts[2]] = value
        elif parts[0] == "component":
            components.setdefault(int(parts[1]), {})[parts[2]] = value
        elif parts[0] == "weights":
            weights[int(parts[1])] = value
        elif key == "rate":
            sc.rate = float(value)
        elif key == "breaks":
            sc.breaks = tuple(float(x) for x in value.split(","))
        else:
            raise ValueError(f"unknown scenario field {key!r}")
    for i in sorted(blocks):
        raw = blocks[i]
        mean = np.array([float(x) for x in raw["mean"].split(",")])
        sc.blocks.append(
            Block(
                length=int(raw["length"]),
                family=raw["family"],
                mean=float(mean[0]) if mean.size == 1 and raw["family"] in ("normal", "t") else mean,
                sd=float(raw.get("sd", 1.0)),
                df=float(raw["df"]) if "df" in raw else None,
                cov=_parse_matrix(raw["cov"]) if "cov" in raw else None,
            )
        )
    if components:
        sc.component_means = []
        sc.component_covs = []
        for i in sorted(components):
            sc.component_means.append(np.array([float(x) for x in components[i]["mean"].split(",")]))
            sc.component_covs.append(_parse_matrix(components[i]["cov"]))
    if weights:
        sc.weights = np.array([[float(x) for x in weights[i].split(",")] for i in sorted(weights)])
    return sc


# -- study tables -----------------------------------------------------------

def study_cells(table):
    """(T, param_name, value) triples for one study table."""
    if table == 1:
        return [(t, "mu", m) for t in (150, 300, 600) for m in (1, 2, 4)] + [
            (t, "sigma2", v) for t in (150, 300, 600) for v in (2, 5, 10)
        ]
    if table == 2:
        return [(t, "nu", v) for t in (150, 300, 600) for v in (16, 8, 2)]
    if table == 3:
        return [(t, "mu", m) for t in (300, 600, 900) for m in (1, 2, 3)] + [
            (t, "rho", r) for t in (300, 600, 900) for r in (0.5, 0.7, 0.9)
        ]
    raise ValueError(f"table must be 1, 2 or 3, got {table!r}")


def study_scenario(table, t, name, value) -> Scenario:
    if table == 1 and name == "mu":
        return mean_change(t, value)
    if table == 1 and name == "sigma2":
        return variance_change(t, value)
    if table == 2 and name == "nu":
        return tail_change(t, value)
    if table == 3 and name == "mu":
        return mv_mean(t, value)
    if table == 3 and name == "rho":
        return mv_correlation(t, value)
    raise ValueError(f"table {table} has no parameter {name!r}")


def run_study(
    table,
    replicates,
    rng: RandomStream,
    cells=None,
    method="divisive",
    sig_lvl=0.05,
    permutations=199,
    min_size=30,
    alpha=1.0,
    agglo_width=30,
    agglo_penalty="neg_count",
):
    """Replicate a study table at the requested scale.

    For each selected cell: generate -> detect -> Rand index against the
    true segmentation; report mean and standard error. cells, when given,
    is a list of {"T": ..., "<param>": ...} filters. Returns a list of row
    dicts with keys (table, T, param, mean_rand, se, replicates).
    """
    if replicates < 2:
        raise ValueError("replicates must be >= 2")
    if method not in ("divisive", "agglo"):
        raise ValueError(f"method must be 'divisive' or 'agglo', got {method!r}")
    all_cells = study_cells(table)
    selected = []
    for idx, (t, name, value) in enumerate(all_cells):
        if cells is not None:
            keep = False
            for want in cells:
                if want.get("T") == t and name in want and float(want[name]) == float(value):
                    keep = True
            if not keep:
                continue
        selected.append((idx, t, name, value))
    if not selected:
        raise ValueError("no study cells match the requested selection")
    rows = []
    for idx, t, name, value in selected:
        sc = study_scenario(table, t, name, value)
        rands = np.empty(replicates)
        for rep in range(replicates):
            data, truth = generate(sc, rng.substream(table, idx, rep))
            if method == "divisive":
                cfg = DivisiveConfig(
                    sig_lvl=sig_lvl,
                    permutations=permutations,
                    min_size=min_size,
                    alpha=alpha,
                    seed=_derived_seed(rng, table, idx, rep),
                )
                est = e_divisive(data, cfg).estimates
            else:
                member = member_from_widths(t, agglo_width)
                est = e_agglo(data, member, alpha=alpha, penalty=agglo_penalty).opt
            rands[rep] = rand_index(
                segmentation_to_membership(truth), segmentation_to_membership(est)
            )
        rows.append(
            {
                "table": table,
                "T": t,
                "param": f"{name}={value:g}",
                "mean_rand": float(rands.mean()),
                "se": float(rands.std(ddof=1) / np.sqrt(replicates)),
                "replicates": replicates,
            }
        )
    return rows


def _derived_seed(rng: RandomStream, *key):
    # deterministic 63-bit seed for the permutation stream of one replicate
    return int(rng.substream(*key).generator().integers(0, 2**63 - 1))


def study_report_csv(rows, fileobj=None) -> str:
    """Render study rows as CSV with the report's fixed column order."""
    buf = _io.StringIO()
    writer = csv.DictWriter(
        buf, fieldnames=["table", "T", "param", "mean_rand", "se", "replicates"]
    )
    writer.writeheader()
    for row in rows:
        out = dict(row)
        out["mean_rand"] = f"{row['mean_rand']:.6f}"
        out["se"] = f"{row['se']:.6f}"
        writer.writerow(out)
    text = buf.getvalue()
    if fileobj is not None:
        fileobj.write(text)
    return text
