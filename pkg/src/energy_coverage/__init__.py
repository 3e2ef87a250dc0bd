"""Energy-aware multi-robot coverage on power diagrams."""

from .controllers import CONTROLLERS, Gains
from .density import DensityField, GaussianBump
from .energy import EnergyProfile, Segment
from .engine import RobotSpec, ScenarioConfig, SimTrace, run_scenario
from .geometry import ConvexPolygon, compute_power_diagram
from .graph import CommGraph, GraphPolicy, algebraic_connectivity
from .scenario import load_scenario, parse_scenario, serialize_scenario

__all__ = [
    "CONTROLLERS", "Gains", "DensityField", "GaussianBump", "EnergyProfile", "Segment",
    "RobotSpec", "ScenarioConfig", "SimTrace", "run_scenario", "ConvexPolygon",
    "compute_power_diagram", "CommGraph", "GraphPolicy", "algebraic_connectivity",
    "load_scenario", "parse_scenario", "serialize_scenario",
]
