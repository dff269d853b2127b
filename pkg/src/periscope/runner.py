"""Batch execution of a scenario config: per-point rows plus a JSON summary."""

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import reversed_periscope as rp
from . import spherical_periscope as sp
from .errors import PeriscopeError
from .frobenius import displacement_field, frobenius_defect, periscope_field_pullback
from .raytrace import RESIDUALS, trace_reversed, trace_spherical

INDEX_NAMES = "ijklmnopqrstuvwxyz"

SPHERICAL_VALUES = ("e_f", "grad_f", "e_g", "grad_g", "d")
REVERSED_VALUES = ("f", "grad_f", "g", "grad_g", "U_norm")


def index_columns(k):
    if k <= len(INDEX_NAMES):
        return list(INDEX_NAMES[:k])
    return [f"i{a}" for a in range(k)]


def spherical_synthesis_defect(spec, syn):
    """Largest violation of the closed-form identities at one point."""
    C = spec.C
    gf = float(np.linalg.norm(syn.grad_f))
    gg = float(np.linalg.norm(syn.grad_g))
    s_f = sp.shared_ratio(syn.e_f, gf)
    s_g = sp.shared_ratio(syn.e_g, gg)
    one_minus_cos = 2.0 * (gf + gg) ** 2 / ((1.0 + gf * gf) * (1.0 + gg * gg))
    closure = syn.e_f * syn.e_g * one_minus_cos - 2.0 * C * (syn.e_f + syn.e_g) + 2.0 * C * C
    defects = [abs(s_f - s_g), abs(np.tan(syn.alpha) - gf), abs(np.tan(syn.beta) - gg), abs(closure)]
    if gf + gg > 0:
        defects.append(abs(s_f - sp.harmonic_ratio(C, gf, gg)))
    return float(max(defects))


def reversed_synthesis_defect(spec, syn):
    gf = float(np.linalg.norm(syn.grad_f))
    mag = 2.0 * (syn.f_val - syn.g_val) * gf / (1.0 - gf * gf)
    defects = [
        abs(float(np.linalg.norm(syn.U)) - mag),
        abs(syn.path_length - 2.0 * spec.C),
        abs(gf * float(np.linalg.norm(syn.grad_g)) - 1.0),
    ]
    if not syn.f_val > syn.g_val:
        defects.append(float("inf"))
    return float(max(defects))


def _frobenius_point(spec, point, h):
    if isinstance(spec, sp.SphericalPeriscopeSpec):
        u = spec.chart_coords(point)
        # keep the difference stencil inside the patch
        u = u * (1.0 - 2.0 * h / spec.chart_half_width)
        return frobenius_defect(periscope_field_pullback(spec), u, h)
    lo, hi = np.asarray(spec.lower), np.asarray(spec.upper)
    shrunk = np.clip(point, lo + 2.0 * h, hi - 2.0 * h)
    return frobenius_defect(displacement_field(spec), shrunk, h)


def compute_row(spec, checks, h, point):
    """One report row as a dict of floats (or ``None`` where not computed) plus a flag."""
    row = {}
    flag = ""
    spherical = isinstance(spec, sp.SphericalPeriscopeSpec)
    try:
        if spherical:
            syn = sp.synthesize(spec, point)
            row.update(
                e_f=syn.e_f,
                grad_f=float(np.linalg.norm(syn.grad_f)),
                e_g=syn.e_g,
                grad_g=float(np.linalg.norm(syn.grad_g)),
                d=syn.d,
            )
            if syn.antipodal:
                flag = "antipodal"
            if "synthesize" in checks:
                row["synthesis_defect"] = spherical_synthesis_defect(spec, syn)
        else:
            syn = rp.synthesize(spec, point)
            row.update(
                f=syn.f_val,
                grad_f=float(np.linalg.norm(syn.grad_f)),
                g=syn.g_val,
                grad_g=float(np.linalg.norm(syn.grad_g)),
                U_norm=float(np.linalg.norm(syn.U)),
            )
            if "synthesize" in checks:
                row["synthesis_defect"] = reversed_synthesis_defect(spec, syn)
        if "trace" in checks:
            res = trace_spherical(spec, point) if spherical else trace_reversed(spec, point)
            row.update(res.residuals)
        if "frobenius" in checks:
            row["frobenius_defect"] = _frobenius_point(spec, point, h)
    except PeriscopeError as exc:
        flag = exc.code
    return row, flag


def _row_task(args):
    return compute_row(*args)


def _fmt(v):
    if v is None:
        return ""
    return repr(float(v))


CHECK_COLUMNS = {
    "synthesize": ("synthesis_defect",),
    "trace": RESIDUALS,
    "frobenius": ("frobenius_defect",),
}


def run_scenario(cfg, spec, out_dir=None, jobs=1):
    """Run every requested check and write the report files.

    Returns ``(summary, exit_code)`` where the exit code is 0 when all checks
    pass and 2 otherwise.
    """
    spherical = cfg.scenario == "spherical"
    points = spec.grid(cfg.grid_counts)
    checks = list(cfg.checks)
    h = cfg.frobenius_step
    tasks = [(spec, checks, h, p) for _, p in points]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_row_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        outcomes = [_row_task(t) for t in tasks]

    value_cols = SPHERICAL_VALUES if spherical else REVERSED_VALUES
    coord_cols = [f"x{a}" for a in range(len(points[0][1]))] if points else []
    extra = ["synthesis_defect", "frobenius_defect"]
    header = index_columns(len(cfg.grid_counts)) + coord_cols + list(value_cols) + extra + list(RESIDUALS) + ["flag"]

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for (idx, p), (row, flag) in zip(points, outcomes):
        writer.writerow(
            [str(i) for i in idx]
            + [_fmt(c) for c in p]
            + [_fmt(row.get(c)) for c in list(value_cols) + extra + list(RESIDUALS)]
            + [flag]
        )

    tolerances = cfg.tolerances.model_dump()
    summary_checks = {}
    hard_errors = sum(1 for _, flag in outcomes if flag and flag != "antipodal")
    for check in checks:
        cols = CHECK_COLUMNS[check]
        maxima, sums, count = {}, dict.fromkeys(cols, 0.0), 0
        worst, worst_val = None, -1.0
        for (idx, p), (row, flag) in zip(points, outcomes):
            if cols[0] not in row:
                continue
            count += 1
            vals = {c: abs(row[c]) for c in cols}
            for c, v in vals.items():
                maxima[c] = max(maxima.get(c, 0.0), v)
                sums[c] += v
            if max(vals.values()) > worst_val:
                worst_val, worst = max(vals.values()), [float(v) for v in p]
        tol = tolerances[check]
        passed = hard_errors == 0 and count == len(points) and all(v < tol for v in maxima.values())
        summary_checks[check] = {
            "pass": passed,
            "tolerance": tol,
            "max": maxima,
            "mean": {c: sums[c] / count for c in cols} if count else {},
            "worst_point": worst,
            "points": count,
        }

    summary = {
        "config": cfg.echo(),
        "points": len(points),
        "errors": hard_errors,
        "flags": sorted({flag for _, flag in outcomes if flag}),
        "tolerances": tolerances,
        "checks": summary_checks,
        "pass": all(c["pass"] for c in summary_checks.values()),
    }

    out_dir = out_dir if out_dir is not None else cfg.output.path
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, cfg.output.name)
    if cfg.output.format == "csv+json":
        with open(stem + ".csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    with open(stem + ".json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return summary, 0 if summary["pass"] else 2
