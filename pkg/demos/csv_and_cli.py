"""
File-based workflow
===================

The same analyses are reachable without Python: write a CSV, run the
`energychange` command, read JSON (or CSV for studies) back. This script
drives the CLI in-process to keep the demo self-contained; from a shell the
equivalent commands are printed alongside.
"""

import json
import tempfile
from pathlib import Path

import numpy as np
from click.testing import CliRunner

from energychange import RandomStream, generate, mean_change
from energychange.cli import main

runner = CliRunner()
workdir = Path(tempfile.mkdtemp(prefix="energychange-demo-"))

data, truth = generate(mean_change(300, 3), RandomStream(41))
series = workdir / "series.csv"
series.write_text("\n".join(str(v[0]) for v in data) + "\n")

argv = ["divisive", "--input", str(series), "--seed", "41",
        "--plot", str(workdir / "series.svg"), "--truth", "101,201"]
print("$ energychange " + " ".join(argv))
result = runner.invoke(main, argv)
doc = json.loads(result.output)
print("estimates:", doc["result"]["estimates"], " true:", truth)
print("input digest:", doc["input_digest"][:23] + "...")

argv = ["agglo", "--input", str(series), "--member", "width:25",
        "--penalty", "neg-count"]
print("\n$ energychange " + " ".join(argv))
result = runner.invoke(main, argv)
print("opt:", json.loads(result.output)["result"]["opt"])

u = workdir / "u.csv"
v = workdir / "v.csv"
u.write_text("\n".join("a" if i < 150 else "b" for i in range(300)) + "\n")
v.write_text("\n".join("x" if i < 140 else "y" for i in range(300)) + "\n")
argv = ["rand-index", "--u", str(u), "--v", str(v)]
print("\n$ energychange " + " ".join(argv))
result = runner.invoke(main, argv)
print(json.loads(result.output)["result"])

print("\nartifacts in", workdir)
