"""Generate the bundled connectivity-study scenarios.

Robots are scattered uniformly with a fixed seed and given heterogeneous,
low depletion coefficients so that batteries last well past the point where
the weights settle. Run from the repository root:

    python3 scripts/make_study_scenarios.py
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from energy_coverage.controllers import Gains
from energy_coverage.energy import EnergyProfile
from energy_coverage.engine import RobotSpec, ScenarioConfig
from energy_coverage.geometry import ConvexPolygon
from energy_coverage.graph import GraphPolicy
from energy_coverage.scenario import serialize_scenario

OUT = Path(__file__).resolve().parents[1] / "src" / "energy_coverage" / "scenarios"

# (name, robots, side length, disk radius, k_w, max_steps)
STUDIES = [
    ("connectivity_n20", 20, 50.0, 40.0, 1.0, 300),
    ("connectivity_n100", 100, 200.0, 40.0, 4.0, 150),
]


def make(name: str, n: int, side: float, radius: float, k_w: float, max_steps: int, seed: int = 0) -> ScenarioConfig:
    rng = np.random.default_rng(seed)
    pos = rng.uniform(0.0, side, (n, 2))
    alpha = rng.uniform(0.05, 0.3, n)
    beta = rng.uniform(0.1, 0.5, n)
    robots = tuple(
        RobotSpec(EnergyProfile.constant(100.0, float(a), float(b)), (float(p[0]), float(p[1])))
        for a, b, p in zip(alpha, beta, pos)
    )
    return ScenarioConfig(
        domain=ConvexPolygon.rectangle(0.0, 0.0, side, side),
        robots=robots,
        graph=GraphPolicy("disk", radius),
        gains=Gains(k_w=k_w, v_max=1.0),
        max_steps=max_steps,
        seed=seed,
        terminate_on_convergence=False,
        name=name,
    )


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, n, side, radius, k_w, steps in STUDIES:
        cfg = make(name, n, side, radius, k_w, steps)
        header = (
            f"# Connectivity study: {n} robots scattered in a {side:g} x {side:g} square (seed 0),\n"
            "# disk communication graph. Generated by scripts/make_study_scenarios.py.\n"
        )
        path = args.out / f"{name}.yaml"
        path.write_text(header + serialize_scenario(cfg), encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
