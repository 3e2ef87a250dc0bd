"""Multi-run experiments: controller comparison and connectivity sweep."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .controllers import CONTROLLERS
from .engine import ScenarioConfig, SimTrace, run_scenario
from .graph import GraphPolicy


def compare_controllers(config: ScenarioConfig, kinds: Sequence[str] = CONTROLLERS) -> dict[str, SimTrace]:
    """Run ``config`` once per controller kind from the same initial positions."""
    unknown = [k for k in kinds if k not in CONTROLLERS]
    if unknown or not kinds:
        raise ValueError(f"controller kinds must be a non-empty subset of {CONTROLLERS}, got {list(kinds)}")
    return {kind: run_scenario(config.with_controller(kind)) for kind in kinds}


def steps_to_fraction(costs: Sequence[float], fraction: float = 0.01) -> Optional[int]:
    """First step whose cost is below ``fraction`` of the step-0 cost (None if never)."""
    c = np.asarray(costs, dtype=float)
    if len(c) == 0:
        return None
    if c[0] == 0.0:
        return 0
    hits = np.flatnonzero(c < fraction * c[0])
    return int(hits[0]) if len(hits) else None


@dataclass(frozen=True)
class SweepRow:
    radius: float
    lambda2: float
    steps_to_1pct: Optional[int]
    steps: int
    reason: str
    initial_cost: float


def sweep_connectivity(config: ScenarioConfig, radii: Sequence[float]) -> list[SweepRow]:
    """Repeat a disk-graph run for each radius, reporting algebraic connectivity
    and how many steps the convergence cost needs to drop below 1% of its start."""
    rows = []
    for r in radii:
        cfg = replace(config, graph=GraphPolicy("disk", float(r), config.graph.frozen))
        tr = run_scenario(cfg)
        cc = tr.series("convergence_cost")
        rows.append(SweepRow(float(r), tr.lambda2, steps_to_fraction(cc), tr.steps, tr.reason,
                             float(cc[0]) if len(cc) else 0.0))
    return rows


def sweep_table(rows: Sequence[SweepRow]) -> str:
    lines = ["radius  lambda2     steps_to_1pct  steps  reason"]
    for r in rows:
        s = "never" if r.steps_to_1pct is None else str(r.steps_to_1pct)
        lines.append(f"{r.radius:<7g} {r.lambda2:<11.4f} {s:<14} {r.steps:<6} {r.reason}")
    return "\n".join(lines) + "\n"
