import json

import numpy as np
import pytest
from click.testing import CliRunner

from energychange import __version__, record_from_json
from energychange.cli import main
from energychange.io import (
    RunRecord,
    agglo_payload,
    divisive_payload,
    ingest_csv,
    payload_to_agglo,
    payload_to_divisive,
    record_to_json,
)


@pytest.fixture
def runner():
    return CliRunner()


def _write_series(path, values):
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    with open(path, "w") as fh:
        for row in arr:
            fh.write(",".join(str(v) for v in row) + "\n")


# -- ingestion ---------------------------------------------------------------

def test_ingest_single_column(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("1\n2\n3\n")
    x = ingest_csv(p)
    assert x.shape == (3, 1)


def test_ingest_header_consumed(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("u,v\n1,2\n3,4\n")
    x = ingest_csv(p, has_header=True)
    assert x.shape == (2, 2)


def test_ingest_missing_cell_names_coordinates(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("1,2\n3,NA\n")
    with pytest.raises(ValueError) as err:
        ingest_csv(p)
    assert "row 2" in str(err.value) and "column 2" in str(err.value)


def test_ingest_ragged_row_rejected(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("1,2\n3\n")
    with pytest.raises(ValueError, match="row 2"):
        ingest_csv(p)


def test_ingest_non_numeric_rejected(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("1,2\n3,x\n")
    with pytest.raises(ValueError, match="column 2"):
        ingest_csv(p)


# -- record round trip --------------------------------------------------------

def test_record_round_trip():
    rec = RunRecord(
        config={"command": "divisive", "seed": 1},
        input_digest="sha256:00",
        result={"type": "divisive", "estimates": [1, 5]},
        version=__version__,
        duration_s=1.25,
    )
    assert record_from_json(record_to_json(rec, include_timing=True)) == rec
    untimed = record_from_json(record_to_json(rec))
    assert untimed.duration_s is None
    assert untimed.result == rec.result


def test_payload_round_trips():
    from energychange import DivisiveConfig, e_divisive, e_agglo, member_from_widths

    rng = np.random.default_rng(0)
    x = np.concatenate([rng.normal(0, 1, 40), rng.normal(5, 1, 40)])
    div = e_divisive(x, DivisiveConfig(min_size=10, permutations=49, seed=3))
    assert payload_to_divisive(divisive_payload(div)) == div
    agg = e_agglo(x, member_from_widths(80, 10))
    back = payload_to_agglo(agglo_payload(agg))
    assert back.opt == agg.opt and back.fit == agg.fit
    assert np.array_equal(back.merged, agg.merged)


# -- divisive command ---------------------------------------------------------

def test_divisive_constant_series(runner, tmp_path):
    p = tmp_path / "flat.csv"
    _write_series(p, np.zeros(100))
    result = runner.invoke(
        main, ["divisive", "--input", str(p), "--seed", "1", "--min-size", "30"]
    )
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert doc["result"]["estimates"] == [1, 101]
    assert doc["result"]["k_hat"] == 1
    assert doc["version"] == __version__
    assert "duration_s" not in doc


def test_divisive_missing_seed_is_usage_error(runner, tmp_path):
    p = tmp_path / "flat.csv"
    _write_series(p, np.zeros(10))
    result = runner.invoke(main, ["divisive", "--input", str(p)])
    assert result.exit_code == 2


def test_divisive_data_error_exit_code(runner, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1\nNA\n")
    result = runner.invoke(main, ["divisive", "--input", str(p), "--seed", "1"])
    assert result.exit_code == 1
    assert "row 2" in result.output


def test_divisive_unknown_flag(runner, tmp_path):
    result = runner.invoke(main, ["divisive", "--nope", "1"])
    assert result.exit_code == 2


def test_divisive_timing_flag_adds_duration(runner, tmp_path):
    p = tmp_path / "flat.csv"
    _write_series(p, np.zeros(60))
    result = runner.invoke(
        main, ["divisive", "--input", str(p), "--seed", "1", "--timing"]
    )
    doc = json.loads(result.output)
    assert doc["duration_s"] >= 0.0


def test_divisive_plot_written(runner, tmp_path):
    p = tmp_path / "x.csv"
    rng = np.random.default_rng(1)
    _write_series(p, np.concatenate([rng.normal(0, 1, 50), rng.normal(6, 1, 50)]))
    svg = tmp_path / "plot.svg"
    result = runner.invoke(
        main,
        [
            "divisive", "--input", str(p), "--seed", "2", "--min-size", "10",
            "--permutations", "49", "--plot", str(svg), "--truth", "51",
        ],
    )
    assert result.exit_code == 0, result.output
    text = svg.read_text()
    assert text.startswith("<svg")
    assert "stroke-dasharray" in text  # estimated boundaries are dashed
    assert '<line' in text


def test_divisive_out_file(runner, tmp_path):
    p = tmp_path / "x.csv"
    _write_series(p, np.zeros(70))
    out = tmp_path / "rec.json"
    result = runner.invoke(
        main, ["divisive", "--input", str(p), "--seed", "3", "--out", str(out)]
    )
    assert result.exit_code == 0
    assert result.output == ""
    doc = json.loads(out.read_text())
    assert doc["result"]["type"] == "divisive"


# -- agglo command --------------------------------------------------------------

def test_agglo_width_member_and_penalty(runner, tmp_path):
    p = tmp_path / "x.csv"
    rng = np.random.default_rng(2)
    _write_series(p, np.concatenate([rng.normal(0, 1, 50), rng.normal(7, 1, 50)]))
    result = runner.invoke(
        main,
        ["agglo", "--input", str(p), "--member", "width:10", "--penalty", "neg-count"],
    )
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert doc["result"]["opt"] == [1, 51, 101]
    assert doc["result"]["progression"][0] == [1, 11, 21, 31, 41, 51, 61, 71, 81, 91]


def test_agglo_member_file_and_penalty_table(runner, tmp_path):
    p = tmp_path / "x.csv"
    rng = np.random.default_rng(3)
    _write_series(p, np.concatenate([rng.normal(0, 1, 30), rng.normal(6, 1, 30)]))
    member = tmp_path / "member.txt"
    member.write_text("\n".join(str(i // 15) for i in range(60)) + "\n")
    table = tmp_path / "penalty.txt"
    table.write_text("0.0\n-1.0\n-2.0\n")
    result = runner.invoke(
        main,
        [
            "agglo", "--input", str(p), "--member", str(member),
            "--penalty", f"table:{table}",
        ],
    )
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert doc["result"]["opt"][0] == 1 and doc["result"]["opt"][-1] == 61


def test_agglo_bad_penalty_usage_error(runner, tmp_path):
    p = tmp_path / "x.csv"
    _write_series(p, np.zeros(20))
    result = runner.invoke(
        main, ["agglo", "--input", str(p), "--member", "width:5", "--penalty", "bogus"]
    )
    assert result.exit_code == 2


# -- simulate command -----------------------------------------------------------

def test_simulate_requires_seed(runner):
    result = runner.invoke(main, ["simulate", "--table", "1"])
    assert result.exit_code == 2


def test_simulate_requires_exactly_one_mode(runner):
    result = runner.invoke(main, ["simulate", "--seed", "1"])
    assert result.exit_code == 2


def test_simulate_table_cell_reference_quality(runner):
    # seeded study cell must clear the documented quality bar
    result = runner.invoke(
        main,
        ["simulate", "--table", "1", "--cell", "T=300,mu=2", "--replicates", "50",
         "--seed", "7"],
    )
    assert result.exit_code == 0, result.output
    row = result.output.strip().splitlines()[1].split(",")
    assert float(row[3]) >= 0.98


def test_simulate_table_cell_csv(runner):
    result = runner.invoke(
        main,
        [
            "simulate", "--table", "1", "--cell", "T=150,mu=4", "--replicates", "2",
            "--permutations", "49", "--seed", "7",
        ],
    )
    assert result.exit_code == 0, result.output
    lines = result.output.strip().splitlines()
    assert lines[0] == "table,T,param,mean_rand,se,replicates"
    assert lines[1].startswith("1,150,mu=4,")


def test_simulate_scenario_mode(runner, tmp_path):
    from energychange import mean_change, scenario_to_config

    cfg = tmp_path / "sc.cfg"
    cfg.write_text(scenario_to_config(mean_change(90, 2)))
    out = tmp_path / "series.csv"
    truth_out = tmp_path / "truth.txt"
    result = runner.invoke(
        main,
        [
            "simulate", "--scenario", str(cfg), "--seed", "5",
            "--out", str(out), "--truth-out", str(truth_out),
        ],
    )
    assert result.exit_code == 0, result.output
    x = ingest_csv(out)
    assert x.shape == (90, 1)
    assert truth_out.read_text().split() == ["1", "31", "61", "91"]


# -- rand-index command -----------------------------------------------------------

def test_rand_index_identical_files(runner, tmp_path):
    u = tmp_path / "u.csv"
    u.write_text("1\n1\n2\n2\n")
    result = runner.invoke(main, ["rand-index", "--u", str(u), "--v", str(u)])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["result"]["rand"] == 1.0
    assert doc["result"]["adjusted_rand"] == 1.0


def test_rand_index_hand_case(runner, tmp_path):
    u = tmp_path / "u.csv"
    v = tmp_path / "v.csv"
    u.write_text("1\n1\n2\n2\n")
    v.write_text("1\n2\n1\n2\n")
    result = runner.invoke(main, ["rand-index", "--u", str(u), "--v", str(v)])
    doc = json.loads(result.output)
    assert doc["result"]["rand"] == pytest.approx(1.0 / 3.0)


# -- determinism ------------------------------------------------------------------

def test_cli_outputs_byte_identical(runner, tmp_path):
    p = tmp_path / "x.csv"
    rng = np.random.default_rng(4)
    _write_series(p, np.concatenate([rng.normal(0, 1, 60), rng.normal(4, 1, 60)]))
    argv = [
        "divisive", "--input", str(p), "--seed", "11",
        "--min-size", "15", "--permutations", "99",
    ]
    first = runner.invoke(main, argv)
    second = runner.invoke(main, argv)
    threaded = runner.invoke(main, argv + ["--threads", "4"])
    assert first.exit_code == 0
    assert first.output == second.output
    assert first.output == threaded.output  # worker count never shows
