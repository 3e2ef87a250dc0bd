"""Convergence speed of the weight consensus against algebraic connectivity.

    python3 scripts/connectivity_study.py [--radii 25,30,40,50,71] [--large]

Sweeps the disk-graph radius on the 20-robot study scenario and reports, for
each radius, the algebraic connectivity and how many steps the convergence
cost takes to fall below 1% of its initial value. ``--large`` also times the
100-robot scenario.
"""

from __future__ import annotations

import argparse
import time

from energy_coverage.engine import run_scenario
from energy_coverage.experiments import steps_to_fraction, sweep_connectivity, sweep_table
from energy_coverage.scenario import load_scenario


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radii", default="25,30,40,50,71")
    ap.add_argument("--large", action="store_true")
    args = ap.parse_args()
    radii = [float(r) for r in args.radii.split(",")]
    print(sweep_table(sweep_connectivity(load_scenario("connectivity_n20"), radii)), end="")
    if args.large:
        t0 = time.perf_counter()
        tr = run_scenario(load_scenario("connectivity_n100"))
        print(f"\nn=100: {tr.steps} steps ({tr.reason}) in {time.perf_counter() - t0:.1f}s, "
              f"lambda2={tr.lambda2:.3f}, steps to 1%: {steps_to_fraction(tr.series('convergence_cost'))}")


if __name__ == "__main__":
    main()
