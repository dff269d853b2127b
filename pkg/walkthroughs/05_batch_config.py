"""Drive a sweep from a JSON config, the way the command line does."""
import csv
import json
import tempfile
from pathlib import Path

from periscope.cli import main

cfg = {
    "scenario": "reversed",
    "dimension": 3,
    "C": 3.0,
    "mirror": {"family": "affine", "params": {"a": [0.5, 0.0], "b": 1.0}},
    "domain": {"lower": [-1.0, -1.0], "upper": [1.0, 1.0]},
    "grid": [3, 3],
    "checks": ["synthesize", "trace"],
    "output": {"name": "affine"},
}

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "affine.json"
    path.write_text(json.dumps(cfg, indent=2))
    code = main(["run", str(path), "--out", tmp])
    print("exit code", code)
    with open(Path(tmp) / "affine.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            print(row["x0"], row["x1"], "g =", row["g"], "|U| =", row["U_norm"], row["path_defect"])
    summary = json.loads((Path(tmp) / "affine.json").read_text())
    print("pass:", summary["pass"], "tolerances:", summary["tolerances"])

    # Slopes of 1 or more cannot be handled; the run says which invariant broke.
    cfg["mirror"]["params"]["a"] = [1.5, 0.0]
    path.write_text(json.dumps(cfg))
    print("exit code", main(["run", str(path), "--out", tmp]))
