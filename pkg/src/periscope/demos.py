"""Canned scenarios that reproduce the acceptance numbers from the command line."""

import csv
import itertools
import json
import os

import numpy as np

from .config import ScenarioConfig, build_spec
from .frobenius import VectorField3, frobenius_defect
from .runner import run_scenario

SCENARIOS = {
    "spherical-bump": {
        "scenario": "spherical",
        "dimension": 3,
        "C": 2.0,
        "mirror": {
            "family": "gaussian-bump",
            "params": {"amplitude": 0.3, "center": [0.2, 0.1, 1.0], "width": 0.5},
        },
        "patch": {"center": [0.0, 0.0, 1.0], "radius": 0.4},
        "grid": [21, 21],
        "checks": ["synthesize", "trace"],
        "output": {"name": "spherical-bump"},
    },
    "reversed-affine": {
        "scenario": "reversed",
        "dimension": 3,
        "C": 3.0,
        "mirror": {"family": "affine", "params": {"a": [0.5, 0.0], "b": 1.0}},
        "domain": {"lower": [-1.0, -1.0], "upper": [1.0, 1.0]},
        "grid": [21, 21],
        "checks": ["synthesize", "trace"],
        "output": {"name": "reversed-affine"},
    },
    "s3-pullback": {
        "scenario": "spherical",
        "dimension": 4,
        "C": 2.5,
        "mirror": {
            "family": "sum-of-bumps",
            "params": {
                "offset": 0.2,
                "bumps": [
                    {"amplitude": 0.3, "center": [0.3, 0.1, 0.0, 1.0], "width": 0.25},
                    {"amplitude": -0.2, "center": [-0.1, 0.35, 0.2, 1.0], "width": 0.2},
                ],
            },
        },
        "patch": {"center": [0.0, 0.0, 0.0, 1.0], "radius": 0.3},
        "grid": [5, 5, 5],
        "checks": ["synthesize", "trace", "frobenius"],
        "output": {"name": "s3-pullback"},
    },
}

NAMES = sorted(list(SCENARIOS) + ["frobenius-contact"])


def contact_field(p):
    """``y d/dx + d/dz``: its dual 1-form is a contact form."""
    return np.array([p[1], 0.0, 1.0])


def _print_table(rows):
    print(f"{'check':<14}{'max':>14}{'tolerance':>12}  result")
    for name, value, tol, ok in rows:
        print(f"{name:<14}{value:>14.3e}{tol:>12.1e}  {'PASS' if ok else 'FAIL'}")


def run_contact(out_dir):
    tol = 1e-8
    grid = np.linspace(-1.0, 1.0, 3)
    rows = []
    for idx in itertools.product(range(3), repeat=3):
        p = grid[list(idx)]
        rows.append((idx, p, frobenius_defect(VectorField3(contact_field), p, 1e-4)))
    worst = max(abs(d + 1.0) for _, _, d in rows)
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "frobenius-contact.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "j", "k", "x0", "x1", "x2", "frobenius_defect"])
        for idx, p, d in rows:
            w.writerow([*map(str, idx), *(repr(float(c)) for c in p), repr(d)])
    summary = {
        "field": "y d/dx + d/dz",
        "points": len(rows),
        "expected_defect": -1.0,
        "max_deviation": worst,
        "tolerance": tol,
        "pass": worst < tol,
    }
    with open(os.path.join(out_dir, "frobenius-contact.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    mean = float(np.mean([d for _, _, d in rows]))
    print(f"contact field defect {mean:.6f} (expected -1, tolerance {tol:g})")
    _print_table([("frobenius", worst, tol, worst < tol)])
    return 0 if summary["pass"] else 2


def run_demo(name, out_dir, jobs=1):
    if name == "frobenius-contact":
        return run_contact(out_dir)
    cfg = ScenarioConfig.model_validate(SCENARIOS[name])
    spec = build_spec(cfg)
    summary, code = run_scenario(cfg, spec, out_dir=out_dir, jobs=jobs)
    table = []
    for check, info in summary["checks"].items():
        table.append((check, max(info["max"].values(), default=0.0), info["tolerance"], info["pass"]))
    if name == "reversed-affine":
        from .reversed_periscope import synthesize

        syn = synthesize(spec, np.zeros(2))
        print(
            f"x = (0, 0): g = {syn.g_val:g}, |U| = {np.linalg.norm(syn.U):g}, "
            f"f + |PQ| + g = {syn.path_length:g} = 2C = {2 * cfg.C:g}"
        )
    elif "trace" in summary["checks"]:
        info = summary["checks"]["trace"]
        print(
            f"max closure residual {max(info['max'].values()):.3e} "
            f"over {info['points']} rays (tolerance {info['tolerance']:g})"
        )
    _print_table(table)
    return code
