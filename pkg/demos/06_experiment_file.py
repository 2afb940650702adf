"""
Scripted experiments with reproducible CSV
==========================================

A flat config file describes a grid; every (point, instance) pair gets a
seed derived from the master seed, so rows do not depend on worker count.
"""
import tempfile
from pathlib import Path

from ksatlab.harness import csv_body, parse_config, read_csv, run_experiment

config = """
experiment = counting
seed = 6
n = 12
k = 3
ratio = 1, 2.5, 4
instances = 200
timing = false
"""

with tempfile.TemporaryDirectory() as d:
    out = Path(d) / "counts.csv"
    run_experiment(parse_config(config), out)
    rows = read_csv(out)
    print(out.read_text().splitlines()[:6], "...\n")
    for m in sorted({int(r["m"]) for r in rows}):
        got = [float(r["value"]) for r in rows if int(r["m"]) == m and r["quantity"] == "solutions"]
        exp = next(float(r["value"]) for r in rows if int(r["m"]) == m and r["quantity"] == "expected_solutions")
        print(f"m={m:3d}: mean models {sum(got) / len(got):8.2f}, expected {exp:8.2f}")

    # Same config with two workers: same CSV body, byte for byte.
    again = Path(d) / "again.csv"
    run_experiment(parse_config(config + "workers = 2\n"), again)
    print("\nidentical with 2 workers:", csv_body(out.read_text()) == csv_body(again.read_text()))
