"""CSV ingestion, run-record serialization, and minimal SVG plots."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .agglo import AggloResult
from .divisive import DivisiveResult

_MISSING_TOKENS = {"", "na", "nan", "n/a", "null"}


def ingest_csv(path, has_header=False, delimiter=",") -> np.ndarray:
    """Read a rectangular numeric CSV into a (T, d) array, rows = time order.

    Ragged rows, non-numeric cells and missing values are rejected with the
    file row and column named; the methods require complete data.
    """
    rows = []
    width = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        for record in reader:
            if reader.line_num == 1 and has_header:
                width = len(record)
                continue
            if not record or all(cell.strip() == "" for cell in record):
                continue  # skip blank lines
            if width is None:
                width = len(record)
            if len(record) != width:
                raise ValueError(
                    f"{path}: row {reader.line_num} has {len(record)} fields, expected {width}"
                )
            parsed = []
            for col, cell in enumerate(record, start=1):
                token = cell.strip()
                if token.lower() in _MISSING_TOKENS:
                    raise ValueError(
                        f"{path}: missing value at row {reader.line_num}, column {col}"
                    )
                try:
                    value = float(token)
                except ValueError:
                    raise ValueError(
                        f"{path}: non-numeric value {cell!r} at row {reader.line_num}, column {col}"
                    ) from None
                if not math.isfinite(value):
                    raise ValueError(
                        f"{path}: non-finite value {cell!r} at row {reader.line_num}, column {col}"
                    )
                parsed.append(value)
            rows.append(parsed)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return np.asarray(rows, dtype=float)


def sha256_bytes(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def sha256_file(path) -> str:
    with open(path, "rb") as fh:
        return sha256_bytes(fh.read())


@dataclass
class RunRecord:
    """One analysis run: config echo, input digest, payload, version."""

    config: dict
    input_digest: str
    result: dict
    version: str
    duration_s: float | None = None


def record_to_json(record: RunRecord, include_timing=False) -> str:
    """Serialize a run record as deterministic JSON (sorted keys, newline).

    duration_s is included only on request, so default output is
    byte-identical across reruns of the same seeded invocation.
    """
    doc = {
        "config": record.config,
        "input_digest": record.input_digest,
        "result": record.result,
        "version": record.version,
    }
    if include_timing and record.duration_s is not None:
        doc["duration_s"] = record.duration_s
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def record_from_json(text: str) -> RunRecord:
    doc = json.loads(text)
    return RunRecord(
        config=doc["config"],
        input_digest=doc["input_digest"],
        result=doc["result"],
        version=doc["version"],
        duration_s=doc.get("duration_s"),
    )


def divisive_payload(res: DivisiveResult) -> dict:
    return {
        "type": "divisive",
        "estimates": [int(v) for v in res.estimates],
        "k_hat": int(res.k_hat),
        "order_found": [int(v) for v in res.order_found],
        "p_values": [float(v) for v in res.p_values],
        "permutations": [int(v) for v in res.permutations],
        "considered_last": None if res.considered_last is None else int(res.considered_last),
    }


def payload_to_divisive(doc: dict) -> DivisiveResult:
    return DivisiveResult(
        estimates=list(doc["estimates"]),
        k_hat=doc["k_hat"],
        order_found=list(doc["order_found"]),
        p_values=list(doc["p_values"]),
        permutations=list(doc["permutations"]),
        considered_last=doc["considered_last"],
    )


def agglo_payload(res: AggloResult) -> dict:
    return {
        "type": "agglo",
        "opt": [int(v) for v in res.opt],
        "fit": [float(v) for v in res.fit],
        "fit_raw": [float(v) for v in res.fit_raw],
        "progression": [[int(v) for v in row] for row in res.progression],
        "merged": [[int(a), int(b)] for a, b in np.asarray(res.merged)],
    }


def payload_to_agglo(doc: dict) -> AggloResult:
    return AggloResult(
        opt=list(doc["opt"]),
        fit=list(doc["fit"]),
        fit_raw=list(doc["fit_raw"]),
        progression=[list(r) for r in doc["progression"]],
        merged=np.asarray(doc["merged"], dtype=np.int64).reshape(len(doc["merged"]), 2),
    )


# -- plotting ---------------------------------------------------------------

def _scale(values, lo, hi, out_lo, out_hi):
    span = hi - lo
    if span == 0:
        span = 1.0
    return out_lo + (values - lo) / span * (out_hi - out_lo)


def plot_series_svg(path, x, estimates, truth=None, width=900, panel_height=150):
    """Write a minimal SVG: one panel per dimension, series polyline,
    dashed vertical rules at estimated interior boundaries, solid rules at
    true ones. Deliberately unstyled beyond that."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[0] == 1 and x.shape[1] > 1:
        x = x.T
    t, d = x.shape
    est = [b for b in estimates if 1 < b < t + 1]
    tru = [b for b in (truth or []) if 1 < b < t + 1]
    margin = 40
    height = d * panel_height + margin
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for dim in range(d):
        top = margin / 2 + dim * panel_height
        bottom = top + panel_height - margin / 2
        lo, hi = float(x[:, dim].min()), float(x[:, dim].max())
        xs = _scale(np.arange(1, t + 1), 1, t, margin, width - 10)
        ys = _scale(x[:, dim], lo, hi, bottom, top)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(xs, ys))
        parts.append(
            f'<rect x="{margin}" y="{top:.2f}" width="{width - 10 - margin}" '
            f'height="{bottom - top:.2f}" fill="none" stroke="black" stroke-width="0.5"/>'
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="1"/>'
        )
        for b in tru:
            xb = _scale(np.array([b]), 1, t, margin, width - 10)[0]
            parts.append(
                f'<line x1="{xb:.2f}" y1="{top:.2f}" x2="{xb:.2f}" y2="{bottom:.2f}" '
                f'stroke="black" stroke-width="1"/>'
            )
        for b in est:
            xb = _scale(np.array([b]), 1, t, margin, width - 10)[0]
            parts.append(
                f'<line x1="{xb:.2f}" y1="{top:.2f}" x2="{xb:.2f}" y2="{bottom:.2f}" '
                f'stroke="crimson" stroke-width="1" stroke-dasharray="5,3"/>'
            )
        parts.append(
            f'<text x="4" y="{top + 12:.2f}" font-size="10">dim {dim + 1} '
            f"[{lo:.3g}, {hi:.3g}]</text>"
        )
    parts.append(f'<text x="{margin}" y="{height - 6}" font-size="10">1 .. {t}</text>')
    parts.append("</svg>")
    text = "\n".join(parts) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return path
