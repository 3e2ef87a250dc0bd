"""Run the bundled six-robot scenarios under every controller and print final weights.

    python3 scripts/reproduce_table1.py [--out DIR]

With ``--out`` each run's trace, summary and final partition SVG are written
to ``DIR/<scenario>/<controller>/``.
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from energy_coverage.experiments import compare_controllers
from energy_coverage.metrics import relative_spread
from energy_coverage.output import emit_trace, final_weights_table
from energy_coverage.scenario import load_scenario

SCENARIOS = ("scenario0", "scenario1", "scenario2", "scenario3", "appendix_bimodal")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()
    for name in SCENARIOS:
        cfg = load_scenario(name)
        traces = compare_controllers(cfg)
        print(f"== {name} ==")
        print(final_weights_table(traces), end="")
        eac = traces["EAC"]
        w = eac.final.weights
        print(f"EAC weight ratios to robot 1: {np.round(w / w[0], 4).tolist()}; "
              f"final w*Edot spread {relative_spread(eac.final.weights * eac.final.e_dots):.2%}")
        if name == "scenario3":
            rec = eac.records
            for t in (11, 22):
                print(f"  weights entering step {t}: {np.round(rec[t].weights, 3).tolist()}")
        print()
        if args.out:
            for kind, tr in traces.items():
                emit_trace(tr, args.out / name / kind, svg_steps=[0, -1])


if __name__ == "__main__":
    main()
