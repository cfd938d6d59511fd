"""Command-line surface: divisive, agglo, simulate, rand-index."""

from __future__ import annotations

import time

import click
import numpy as np

from . import __version__
from .agglo import e_agglo, member_from_widths
from .divisive import DivisiveConfig, e_divisive
from .io import (
    RunRecord,
    agglo_payload,
    divisive_payload,
    ingest_csv,
    plot_series_svg,
    record_to_json,
    sha256_bytes,
    sha256_file,
)
from .metrics import adjusted_rand_index, rand_index
from .rng import RandomStream
from .simulate import generate, run_study, scenario_from_config, study_report_csv


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _parse_truth(truth):
    if not truth:
        return None
    try:
        return [int(v) for v in truth.split(",") if v.strip()]
    except ValueError:
        raise click.ClickException(f"--truth must be comma-separated integers, got {truth!r}")


def _load_series(path, header, delimiter):
    try:
        return ingest_csv(path, has_header=header, delimiter=delimiter)
    except ValueError as exc:
        raise click.ClickException(str(exc))


@click.group()
@click.version_option(version=__version__, prog_name="energychange")
def main():
    """Nonparametric change point analysis via energy statistics."""


@main.command()
@click.option("--input", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--header/--no-header", default=False, help="First line is a header row.")
@click.option("--delimiter", default=",", show_default=True)
@click.option("--sig-lvl", default=0.05, show_default=True)
@click.option("--permutations", default=199, show_default=True, help="Permutation budget R.")
@click.option("--min-size", default=30, show_default=True)
@click.option("--alpha", default=1.0, show_default=True)
@click.option("--k", default=None, type=int, help="Fix the change point count; skips testing.")
@click.option("--seed", required=True, type=int)
@click.option("--eps", default=1e-3, show_default=True, help="Accepted for parity; inert.")
@click.option("--half", default=1000, show_default=True, help="Accepted for parity; inert.")
@click.option("--threads", default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Write the run record here.")
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False))
@click.option("--truth", default=None, help="Comma-separated true boundaries for the plot.")
@click.option("--timing", is_flag=True, help="Include wall-clock duration in the record.")
def divisive(path, header, delimiter, sig_lvl, permutations, min_size, alpha, k, seed,
             eps, half, threads, out, plot_path, truth, timing):
    """Divisive estimation with permutation significance testing."""
    x = _load_series(path, header, delimiter)
    cfg = DivisiveConfig(
        sig_lvl=sig_lvl, permutations=permutations, min_size=min_size, alpha=alpha,
        k=k, seed=seed, eps=eps, half=half, threads=threads,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise click.UsageError(str(exc))
    started = time.perf_counter()
    try:
        res = e_divisive(x, cfg)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    record = RunRecord(
        # threads is execution infrastructure, not analysis config: leaving it
        # out keeps output byte-identical across worker counts
        config={
            "command": "divisive", "input": path, "sig_lvl": sig_lvl,
            "permutations": permutations, "min_size": min_size, "alpha": alpha,
            "k": k, "seed": seed, "eps": eps, "half": half,
        },
        input_digest=sha256_file(path),
        result=divisive_payload(res),
        version=__version__,
        duration_s=time.perf_counter() - started,
    )
    _emit(record_to_json(record, include_timing=timing), out)
    if plot_path:
        plot_series_svg(plot_path, x, res.estimates, truth=_parse_truth(truth))


def _parse_member(member, t):
    if member.startswith("width:"):
        try:
            width = int(member.split(":", 1)[1])
        except ValueError:
            raise click.UsageError(f"bad --member width: {member!r}")
        return member_from_widths(t, width)
    labels = []
    with open(member) as fh:
        for line in fh:
            token = line.strip()
            if token:
                labels.append(token)
    if len(labels) != t:
        raise click.ClickException(
            f"member file has {len(labels)} labels but the series has {t} rows"
        )
    return np.asarray(labels)


def _parse_penalty(penalty):
    if penalty in ("none", "neg-count", "mean-gap"):
        return penalty.replace("-", "_")
    if penalty.startswith("table:"):
        path = penalty.split(":", 1)[1]
        values = []
        with open(path) as fh:
            for line in fh:
                token = line.strip()
                if token:
                    values.append(float(token))
        return values
    raise click.UsageError(
        f"--penalty must be none, neg-count, mean-gap or table:<path>, got {penalty!r}"
    )


@main.command()
@click.option("--input", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--header/--no-header", default=False)
@click.option("--delimiter", default=",", show_default=True)
@click.option("--member", required=True,
              help="Membership file (one label per row) or width:N for equal blocks.")
@click.option("--penalty", default="none", show_default=True,
              help="none, neg-count, mean-gap or table:<path> (one value per step).")
@click.option("--alpha", default=1.0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False))
@click.option("--truth", default=None)
@click.option("--timing", is_flag=True)
def agglo(path, header, delimiter, member, penalty, alpha, out, plot_path, truth, timing):
    """Agglomerative estimation from an initial segmentation."""
    x = _load_series(path, header, delimiter)
    member_vec = _parse_member(member, x.shape[0])
    pen = _parse_penalty(penalty)
    started = time.perf_counter()
    try:
        res = e_agglo(x, member_vec, alpha=alpha, penalty=pen)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    record = RunRecord(
        config={
            "command": "agglo", "input": path, "member": member,
            "penalty": penalty, "alpha": alpha,
        },
        input_digest=sha256_file(path),
        result=agglo_payload(res),
        version=__version__,
        duration_s=time.perf_counter() - started,
    )
    _emit(record_to_json(record, include_timing=timing), out)
    if plot_path:
        plot_series_svg(plot_path, x, res.opt, truth=_parse_truth(truth))


def _parse_cell(cell):
    if not cell:
        return None
    want = {}
    for item in cell.split(","):
        if "=" not in item:
            raise click.UsageError(f"--cell entries must look like T=300,mu=2; got {item!r}")
        key, value = item.split("=", 1)
        key = key.strip()
        want[key] = int(value) if key == "T" else float(value)
    return [want]


@main.command()
@click.option("--table", type=click.IntRange(1, 3), default=None,
              help="Study table to replicate (1, 2 or 3).")
@click.option("--cell", default=None, help="Restrict to one cell, e.g. T=300,mu=2.")
@click.option("--replicates", default=50, show_default=True)
@click.option("--method", type=click.Choice(["divisive", "agglo"]), default="divisive",
              show_default=True)
@click.option("--sig-lvl", default=0.05, show_default=True)
@click.option("--permutations", default=199, show_default=True)
@click.option("--min-size", default=30, show_default=True)
@click.option("--alpha", default=1.0, show_default=True)
@click.option("--agglo-width", default=30, show_default=True)
@click.option("--scenario", "scenario_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Generate one series from a scenario config instead.")
@click.option("--truth-out", type=click.Path(dir_okay=False),
              help="With --scenario: write the true boundaries here, one per line.")
@click.option("--seed", required=True, type=int)
@click.option("--out", type=click.Path(dir_okay=False))
def simulate(table, cell, replicates, method, sig_lvl, permutations, min_size, alpha,
             agglo_width, scenario_path, truth_out, seed, out):
    """Replicate a study table (CSV report) or generate a scenario series."""
    if (table is None) == (scenario_path is None):
        raise click.UsageError("pass exactly one of --table or --scenario")
    rng = RandomStream(seed)
    if scenario_path is not None:
        with open(scenario_path) as fh:
            sc = scenario_from_config(fh.read())
        try:
            data, truth = generate(sc, rng)
        except ValueError as exc:
            raise click.ClickException(str(exc))
        lines = "\n".join(",".join(repr(float(v)) for v in row) for row in data) + "\n"
        _emit(lines, out)
        if truth_out:
            with open(truth_out, "w") as fh:
                fh.write("\n".join(str(b) for b in truth) + "\n")
        return
    try:
        rows = run_study(
            table, replicates, rng, cells=_parse_cell(cell), method=method,
            sig_lvl=sig_lvl, permutations=permutations, min_size=min_size,
            alpha=alpha, agglo_width=agglo_width,
        )
    except ValueError as exc:
        raise click.ClickException(str(exc))
    _emit(study_report_csv(rows), out)


def _read_membership(path):
    labels = []
    with open(path) as fh:
        for line in fh:
            token = line.strip()
            if token:
                labels.append(token.split(",")[0].strip())
    if not labels:
        raise click.ClickException(f"{path}: no labels found")
    return np.asarray(labels)


@main.command(name="rand-index")
@click.option("--u", "u_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--v", "v_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False))
def rand_index_cmd(u_path, v_path, out):
    """Rand and adjusted Rand index between two membership vectors."""
    u = _read_membership(u_path)
    v = _read_membership(v_path)
    try:
        r = rand_index(u, v)
        ar = adjusted_rand_index(u, v)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    record = RunRecord(
        config={"command": "rand-index", "u": u_path, "v": v_path},
        input_digest=sha256_bytes(
            (sha256_file(u_path) + "+" + sha256_file(v_path)).encode()
        ),
        result={"type": "rand-index", "rand": float(r), "adjusted_rand": float(ar)},
        version=__version__,
    )
    _emit(record_to_json(record), out)


if __name__ == "__main__":
    main()
