"""End-to-end command-line workflow on synthetic data.

Drives the `twpasim` CLI programmatically: synthesizes a resonator
spectrum and an insertion-loss trace, fits both back, runs a linear
simulation, and finishes with the self-check report.  Every command
writes a bundle directory containing results.json (with provenance),
CSV data, and a plain-text summary.

Run:  python demos/08_cli_workflow.py
"""

import json
import os
import tempfile

from twpasim.cli import run

root = tempfile.mkdtemp(prefix="twpasim_demo_")
print(f"writing bundles under {root}\n")


def show(outdir):
    with open(os.path.join(outdir, "results.json")) as fh:
        res = json.load(fh)
    print(f"  command:  {res['command']}")
    print(f"  version:  {res['provenance']['version']}")
    for k, v in res["results"].items():
        if isinstance(v, (int, float, str, bool)) or v is None:
            print(f"  {k}: {v}")
    print()


for argv in (
    ["synth", "--kind", "resonator", "--seed", "3",
     "--out", f"{root}/synth_res"],
    ["fit-resonator", "--data", f"{root}/synth_res/resonator_spectrum.csv",
     "--out", f"{root}/fit_res"],
    ["synth", "--kind", "loss", "--seed", "6", "--out", f"{root}/synth_loss"],
    ["fit-loss", "--data", f"{root}/synth_loss/insertion_loss.csv",
     "--out", f"{root}/fit_loss"],
    ["simulate-linear", "--fmin", "7.5e9", "--fmax", "8.5e9",
     "--points", "201", "--out", f"{root}/linear"],
    ["paper-report", "--out", f"{root}/report"],
):
    print("$ twpasim " + " ".join(argv))
    status, _ = run(argv)
    if status != 0:
        raise SystemExit(f"command failed with status {status}")
    show(argv[argv.index("--out") + 1])

print("self-check summary:")
with open(f"{root}/report/summary.txt") as fh:
    print(fh.read())
