"""End-to-end experiment pipeline, as the CLI drives it.

Builds a small density sweep, writes the results CSV, computes reductions
against both baselines, and prints where everything landed.  Equivalent CLI:

    beampage sweep --axis ue_density --values 100,200 --replications 1 --out demo_out
    beampage compare --results demo_out/sweep.csv --baseline legacy --out demo_out
    beampage compare --results demo_out/sweep.csv --baseline madp --out demo_out

Run: python3 demos/04_experiment_pipeline.py
"""

import tempfile
from pathlib import Path

from beampage.engine import SimConfig
from beampage.experiments import (
    ExperimentSpec,
    compare_to_baseline,
    default_schemes,
    read_results_csv,
    run_experiment,
)
from beampage.protocols import SchemeKind

out = Path(tempfile.mkdtemp(prefix="beampage_demo_"))

spec = ExperimentSpec(
    mode="sweep",
    out_dir=out,
    sim=SimConfig(
        scheme=SchemeKind.legacy(),  # placeholder; the sweep iterates schemes
        total_beams=64,
        ue_density=200,
        total_cycles=2_000,
        warmup_cycles=400,
    ),
    schemes=default_schemes(),
    sweep_axis="ue_density",
    sweep_values=(100.0, 200.0),
    replications=1,
    seed=0,
)
path, table = run_experiment(spec)
print("per-run summary:")
for line in table:
    print(" ", line)
print(f"\nresults CSV: {path}")

rows = read_results_csv(path)
print(f"rows: {len(rows)} (one per config x metric, plus aggregates)")

print("\nresource reduction vs legacy:")
for r in compare_to_baseline(rows, "legacy", out_path=out / "compare_legacy.csv"):
    if r.scheme != "legacy":
        print(f"  {r.scheme:>14s} at density {r.ue_density:>5.0f}: {r.value:6.2f}%")

print("\npresence-request reduction vs madp:")
for r in compare_to_baseline(rows, "madp", out_path=out / "compare_madp.csv"):
    if r.scheme not in ("legacy", "madp"):
        print(f"  {r.scheme:>14s} at density {r.ue_density:>5.0f}: {r.value:6.2f}%")

print(f"\nall artifacts under {out}")
