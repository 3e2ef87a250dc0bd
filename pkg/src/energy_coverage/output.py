"""Trace files: per-robot CSV, per-step scalar CSV, text summary and SVG partitions."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .engine import SimTrace, StepRecord
from .geometry import compute_power_diagram
from .scenario import serialize_scenario

TRACE_COLUMNS = ("step", "robot", "x", "y", "weight", "energy", "e_dot", "area", "mass",
                 "dist_to_centroid", "w_times_edot")
STEP_COLUMNS = ("step", "locational_cost", "convergence_cost")

# qualitative palette for cell fills
PALETTE = ("#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
           "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f")


def _fmt(x) -> str:
    # repr of a Python float is the shortest exact round-trip form
    return repr(float(x))


def trace_rows(record: StepRecord) -> Iterable[list[str]]:
    for i in range(len(record.weights)):
        yield [
            str(record.step), str(i),
            _fmt(record.positions[i, 0]), _fmt(record.positions[i, 1]),
            _fmt(record.weights[i]), _fmt(record.energies[i]), _fmt(record.e_dots[i]),
            _fmt(record.areas[i]), _fmt(record.masses[i]), _fmt(record.dists[i]),
            _fmt(record.weights[i] * record.e_dots[i]),
        ]


def write_trace_csv(trace: SimTrace, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for rec in trace.records:
            w.writerows(trace_rows(rec))


def write_steps_csv(trace: SimTrace, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(STEP_COLUMNS)
        for rec in trace.records:
            w.writerow([str(rec.step), _fmt(rec.locational_cost), _fmt(rec.convergence_cost)])


def summary_text(trace: SimTrace) -> str:
    cfg = trace.config
    f = trace.final
    lines = [
        f"scenario: {cfg.name or '(unnamed)'}",
        f"controller: {cfg.controller}",
        f"robots: {cfg.n}",
        f"termination: {trace.reason}",
        f"steps executed: {trace.steps}",
        f"algebraic connectivity: {trace.lambda2:.6g}",
        f"k_w used: {trace.k_w:.6g}",
        f"final locational cost: {f.locational_cost:.6g}",
        "final weights: " + ", ".join(f"{w:.4f}" for w in f.weights),
        "final energies: " + ", ".join(f"{e:.4f}" for e in f.energies),
        "final cell areas: " + ", ".join(f"{a:.4f}" for a in f.areas),
        "",
        "# resolved configuration (defaults applied)",
        serialize_scenario(cfg),
    ]
    return "\n".join(lines)


def partition_svg(trace: SimTrace, record: StepRecord, size: int = 480) -> str:
    """Filled power cells with robot markers, recomputed from the recorded state."""
    dom = trace.config.domain
    xmin, ymin, xmax, ymax = dom.bounds
    scale = size / max(xmax - xmin, ymax - ymin)
    width, height = (xmax - xmin) * scale, (ymax - ymin) * scale

    def tx(p) -> str:
        return f"{(p[0] - xmin) * scale:.3f},{(ymax - p[1]) * scale:.3f}"

    cells = compute_power_diagram(record.positions, record.weights, dom)
    r = max(2.0, size / 120)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.3f} {height:.3f}">',
        f"<title>{trace.config.controller} partition at step {record.step}</title>",
    ]
    for cell in cells:
        if cell.polygon is None:
            continue
        pts = " ".join(tx(v) for v in cell.polygon.vertices)
        color = PALETTE[cell.owner % len(PALETTE)]
        out.append(f'<polygon points="{pts}" fill="{color}" stroke="#333333" stroke-width="1"/>')
    out.append(f'<polygon points="{" ".join(tx(v) for v in dom.vertices)}" fill="none" '
               f'stroke="#000000" stroke-width="2"/>')
    for i, p in enumerate(record.positions):
        x, y = tx(p).split(",")
        out.append(f'<circle cx="{x}" cy="{y}" r="{r:.2f}" fill="#000000"/>')
        out.append(f'<text x="{float(x) + r:.3f}" y="{float(y) - r:.3f}" font-size="{2.5 * r:.1f}" '
                   f'font-family="sans-serif">{i + 1}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_trace(trace: SimTrace, out_dir, svg_steps: Optional[Iterable[int]] = None) -> list[Path]:
    """Write ``trace.csv``, ``steps.csv``, ``summary.txt`` and optional SVG snapshots.

    ``svg_steps`` selects recorded steps to draw; the value ``-1`` (or
    ``trace.steps``) draws the terminal state.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "trace.csv", out / "steps.csv", out / "summary.txt"]
    write_trace_csv(trace, written[0])
    write_steps_csv(trace, written[1])
    written[2].write_text(summary_text(trace), encoding="utf-8")
    for step in svg_steps or ():
        if step == -1 or step == trace.steps:
            rec = trace.final
        elif 0 <= step < trace.steps:
            rec = trace.records[step]
        else:
            raise ValueError(f"step {step} was not executed (trace has {trace.steps} steps)")
        path = out / f"partition_{rec.step}.svg"
        path.write_text(partition_svg(trace, rec), encoding="utf-8")
        written.append(path)
    return written


def final_weights_table(traces: dict[str, SimTrace]) -> str:
    """Side-by-side comparison: final weights, final locational cost, steps."""
    rows = [("controller", "final cost", "steps", "reason", "final weights")]
    for kind, tr in traces.items():
        rows.append((kind, f"{tr.final.locational_cost:.4f}", str(tr.steps), tr.reason,
                     "{" + ", ".join(f"{w:.3g}" for w in np.asarray(tr.final.weights)) + "}"))
    widths = [max(len(r[c]) for r in rows) for c in range(4)]
    lines = ["  ".join(r[c].ljust(widths[c]) for c in range(4)) + "  " + r[4] for r in rows]
    return "\n".join(lines) + "\n"
