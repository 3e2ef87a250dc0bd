"""Command line entry point.

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .controllers import CONTROLLERS
from .energy import EnergyStateError
from .engine import run_scenario
from .experiments import compare_controllers, sweep_connectivity, sweep_table
from .graph import DisconnectedGraphError
from .output import emit_trace, final_weights_table
from .scenario import BUNDLED, ScenarioError, load_scenario

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

log = logging.getLogger("energy_coverage")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _kinds(text: str) -> list[str]:
    kinds = [k.strip().upper() for k in text.split(",") if k.strip()]
    bad = [k for k in kinds if k not in CONTROLLERS]
    if bad or not kinds:
        raise argparse.ArgumentTypeError(f"controllers must come from {','.join(CONTROLLERS)}")
    return kinds


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="energy-coverage", description="Energy-aware multi-robot coverage simulator.")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = ap.add_subparsers(dest="command", required=True)
    scen_help = f"scenario file, or a bundled name ({', '.join(BUNDLED)})"

    run = sub.add_parser("run", help="simulate one scenario and write its trace")
    run.add_argument("scenario", help=scen_help)
    run.add_argument("--controller", type=str.upper, choices=CONTROLLERS)
    run.add_argument("--out", type=Path, default=Path("out"))
    run.add_argument("--svg", type=lambda s: [int(x) for x in s.split(",")], default=[0, -1],
                     help="recorded steps to draw as SVG (-1 = terminal state); default 0,-1")

    cmp_ = sub.add_parser("compare", help="run the scenario under several controllers")
    cmp_.add_argument("scenario", help=scen_help)
    cmp_.add_argument("--controllers", type=_kinds, default=list(CONTROLLERS))
    cmp_.add_argument("--out", type=Path, help="also write each controller's trace under OUT/<kind>")

    sw = sub.add_parser("sweep-connectivity", help="convergence speed against disk-graph radius")
    sw.add_argument("scenario", help=scen_help)
    sw.add_argument("--radii", type=_floats, required=True)

    val = sub.add_parser("validate", help="parse and check a scenario file")
    val.add_argument("scenario", help=scen_help)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_scenario(args.scenario)
        if args.command == "validate":
            print(f"ok: {config.name or args.scenario}: {config.n} robots, controller {config.controller}")
            return EXIT_OK
        if args.command == "run":
            if args.controller:
                config = config.with_controller(args.controller)
            trace = run_scenario(config)
            emit_trace(trace, args.out, svg_steps=args.svg)
            print(f"{trace.reason} after {trace.steps} steps; wrote {args.out}")
        elif args.command == "compare":
            traces = compare_controllers(config, args.controllers)
            print(final_weights_table(traces), end="")
            if args.out:
                for kind, tr in traces.items():
                    emit_trace(tr, args.out / kind, svg_steps=[-1])
        elif args.command == "sweep-connectivity":
            print(sweep_table(sweep_connectivity(config, args.radii)), end="")
    except ScenarioError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DisconnectedGraphError, EnergyStateError, OSError, ValueError, RuntimeError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
