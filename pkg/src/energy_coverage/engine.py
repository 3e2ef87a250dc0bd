"""Synchronous-round simulation of the coverage controllers.

Each round: partition, centroids, termination check, position move, energy
consumption and online rate estimate, rate-change reset, weight update.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .controllers import (
    CONTROLLERS,
    Gains,
    NeighborReport,
    atc_weight_delta,
    eac_weight_delta,
    pbc_velocity,
    pbc_weight,
    position_step,
    wmtc_weight,
)
from .density import DensityField
from .energy import (
    RATE_CHANGE_THRESHOLD,
    EnergyProfile,
    EnergyState,
    depletion_rate,
    detect_rate_change_and_reset,
    estimate_rate_online,
    step_energy,
)
from .geometry import ConvexPolygon, PowerCell, cell_moments, compute_power_diagram, fill_moments
from .graph import CommGraph, GraphPolicy, algebraic_connectivity, build_graph
from .metrics import convergence_cost, convergence_values, locational_cost

log = logging.getLogger(__name__)

ENERGY_DEPLETED = "energy-depleted"
ALL_AT_CENTROID = "all-at-centroid"
STEP_CAP = "step-cap"
SPEED_MODELS = ("nominal", "measured")


@dataclass(frozen=True)
class RobotSpec:
    profile: EnergyProfile
    position: Optional[tuple[float, float]] = None  # None: random placement from the seed


@dataclass(frozen=True)
class ScenarioConfig:
    domain: ConvexPolygon
    robots: tuple[RobotSpec, ...]
    density: DensityField = field(default_factory=DensityField)
    graph: GraphPolicy = field(default_factory=GraphPolicy)
    controller: str = "EAC"
    gains: Gains = field(default_factory=Gains)
    max_steps: int = 500
    seed: int = 0
    # "nominal": energy is charged at the cruise speed v_max every step;
    # "measured": at the distance actually travelled
    speed_model: str = "nominal"
    terminate_on_convergence: bool = True
    rate_threshold: float = RATE_CHANGE_THRESHOLD
    two_sided_reset: bool = True
    e_max: float = 100.0
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "robots", tuple(self.robots))
        if not self.robots:
            raise ValueError("scenario needs at least one robot")
        if self.controller not in CONTROLLERS:
            raise ValueError(f"controller must be one of {CONTROLLERS}, got {self.controller!r}")
        if self.speed_model not in SPEED_MODELS:
            raise ValueError(f"speed_model must be one of {SPEED_MODELS}")
        if not (isinstance(self.max_steps, int) and self.max_steps >= 0):
            raise ValueError("max_steps must be a non-negative integer")
        if not self.rate_threshold > 0.0:
            raise ValueError("rate_threshold must be positive")
        if not self.e_max > 0.0:
            raise ValueError("e_max must be positive")
        pos = self.initial_positions()
        if not np.all(self.domain.contains(pos)):
            raise ValueError("initial positions must lie inside the domain")
        d = np.hypot(pos[:, None, 0] - pos[None, :, 0], pos[:, None, 1] - pos[None, :, 1])
        if np.any(d[np.triu_indices(len(pos), 1)] <= 1e-6):
            raise ValueError("initial positions must be distinct (>1e-6 m apart)")

    @property
    def n(self) -> int:
        return len(self.robots)

    def initial_positions(self) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        xmin, ymin, xmax, ymax = self.domain.bounds
        out = []
        for spec in self.robots:
            if spec.position is not None:
                out.append(spec.position)
                continue
            while True:
                q = rng.uniform((xmin, ymin), (xmax, ymax))
                if self.domain.contains(q)[0]:
                    out.append(tuple(q))
                    break
        return np.array(out, dtype=float).reshape(-1, 2)

    def with_controller(self, kind: str) -> "ScenarioConfig":
        return replace(self, controller=kind)


@dataclass(frozen=True)
class RobotState:
    id: int
    position: np.ndarray
    weight: float
    energy: EnergyState
    profile: EnergyProfile
    alpha: float
    beta: float


@dataclass
class StepRecord:
    """What every robot saw and did during one round (or the terminal state)."""

    step: int
    positions: np.ndarray
    weights: np.ndarray
    energies: np.ndarray
    e_dots: np.ndarray
    e_refs: np.ndarray
    areas: np.ndarray
    masses: np.ndarray
    dists: np.ndarray
    speeds: np.ndarray
    locational_cost: float
    convergence_cost: float

    @property
    def w_times_edot(self) -> np.ndarray:
        return self.weights * self.e_dots


@dataclass
class SimTrace:
    config: ScenarioConfig
    records: list[StepRecord]
    final: StepRecord
    reason: str
    graph: CommGraph
    lambda2: float
    k_w: float

    @property
    def steps(self) -> int:
        return len(self.records)

    def series(self, attr: str) -> np.ndarray:
        return np.array([getattr(r, attr) for r in self.records])


def apply_schedule(state: RobotState, step: int) -> RobotState:
    seg = state.profile.segment_at(step)
    return replace(state, alpha=seg.alpha, beta=seg.beta)


def termination_check(
    states: Sequence[RobotState],
    cells: Sequence[PowerCell],
    gains: Gains,
    step: int = 0,
    max_steps: Optional[int] = None,
    check_centroid: bool = True,
) -> Optional[str]:
    """Reason to stop before executing ``step``, or None to continue."""
    if any(s.energy.e_current < gains.delta_energy for s in states):
        return ENERGY_DEPLETED
    if check_centroid:
        ok = all(
            cell.centroid is None or float(np.hypot(*(cell.centroid - s.position))) <= gains.eps_position
            for s, cell in zip(states, cells)
        )
        if ok:
            return ALL_AT_CENTROID
    if max_steps is not None and step >= max_steps:
        return STEP_CAP
    return None


def resolve_k_w(config: ScenarioConfig) -> float:
    if config.gains.k_w is not None:
        return config.gains.k_w
    total_mass, _ = cell_moments(config.domain, config.density)
    return 0.1 * total_mass / config.n


def _partition(config: ScenarioConfig, states: Sequence[RobotState]) -> list[PowerCell]:
    pos = np.array([s.position for s in states])
    w = np.array([s.weight for s in states])
    return fill_moments(compute_power_diagram(pos, w, config.domain), config.density)


def _snapshot(step, states, cells, config, graph, e_dots, speeds) -> StepRecord:
    pos = np.array([s.position for s in states])
    w = np.array([s.weight for s in states])
    e_refs = np.array([s.energy.e_init_ref for s in states])
    dists = np.array([
        np.nan if c.centroid is None else float(np.hypot(*(c.centroid - p))) for c, p in zip(cells, pos)
    ])
    return StepRecord(
        step=step,
        positions=pos,
        weights=w,
        energies=np.array([s.energy.e_current for s in states]),
        e_dots=np.asarray(e_dots, dtype=float),
        e_refs=e_refs,
        areas=np.array([c.area for c in cells]),
        masses=np.array([c.mass for c in cells]),
        dists=dists,
        speeds=np.asarray(speeds, dtype=float),
        locational_cost=locational_cost(cells, pos, w, config.density),
        convergence_cost=convergence_cost(graph, convergence_values(w, e_dots, e_refs)),
    )


def _next_weights(config, states, cells, graph, k_w) -> list[float]:
    kind = config.controller
    gains = config.gains
    if kind == "WMTC":
        return [wmtc_weight() for _ in states]
    if kind == "PBC":
        return [pbc_weight(s.energy.e_current, config.e_max) for s in states]
    reports = [NeighborReport(s.id, s.weight, s.energy.e_init_ref, s.energy.e_dot_last) for s in states]
    out = []
    for s, cell in zip(states, cells):
        mass = max(cell.mass, gains.mass_floor)
        nbs = [reports[j] for j in graph.neighbors(s.id)]
        if kind == "EAC":
            rate = eac_weight_delta(reports[s.id], nbs, mass, k_w)
            out.append(max(s.weight + rate * gains.dt, gains.w_floor))
        else:
            rate = atc_weight_delta(reports[s.id], nbs, mass, k_w, gains.k_e, gains.alpha_atc)
            out.append(max(s.weight + rate * gains.dt, gains.w_floor))
    return out


def run_scenario(config: ScenarioConfig) -> SimTrace:
    gains = config.gains
    positions = config.initial_positions()
    graph = build_graph(positions, config.graph)
    lambda2 = algebraic_connectivity(graph)
    k_w = resolve_k_w(config)
    log.debug("scenario %s: n=%d controller=%s lambda2=%.4g k_w=%.4g",
              config.name, config.n, config.controller, lambda2, k_w)

    states = []
    for i, spec in enumerate(config.robots):
        seg = spec.profile.segment_at(0)
        prior = depletion_rate(seg.alpha, seg.beta, gains.v_max)
        states.append(RobotState(i, positions[i], 1.0, EnergyState.fresh(spec.profile.e_init, prior),
                                 spec.profile, seg.alpha, seg.beta))

    records: list[StepRecord] = []
    step = 0
    while True:
        states = [apply_schedule(s, step) for s in states]
        cells = _partition(config, states)
        reason = termination_check(states, cells, gains, step, config.max_steps,
                                   check_centroid=config.terminate_on_convergence)
        if reason is not None:
            break
        if not config.graph.frozen and step > 0:
            graph = build_graph(np.array([s.position for s in states]), config.graph)

        # move
        moved = []
        for s, cell in zip(states, cells):
            if cell.centroid is None:
                new = s.position
            elif config.controller == "PBC":
                v = pbc_velocity(s.position, cell.centroid, s.energy.e_current, config.e_max, gains.v_max)
                new = config.domain.project(s.position + v * gains.dt)
            else:
                new = position_step(s.position, cell.centroid, gains, config.domain)
            moved.append(new)
        speeds = [float(np.hypot(*(new - s.position))) / gains.dt for s, new in zip(states, moved)]

        # consume energy, then measure the rate from the two readings
        measured = []
        after = []
        for s, new, speed in zip(states, moved, speeds):
            charged = gains.v_max if config.speed_model == "nominal" else speed
            energy = step_energy(s.energy, depletion_rate(s.alpha, s.beta, charged), gains.dt)
            rate = estimate_rate_online(s.energy.e_current, energy.e_current, gains.dt)
            energy = replace(energy, e_dot_last=rate)
            # the new rate regime began at the previous reading, so that reading
            # becomes the reference; an emptied battery is never re-anchored
            if energy.e_current > 0.0:
                changed, _ = detect_rate_change_and_reset(
                    replace(energy, e_current=s.energy.e_current), config.rate_threshold, config.two_sided_reset
                )
                if changed:
                    energy = replace(energy, e_init_ref=s.energy.e_current)
            measured.append(rate)
            after.append(replace(s, position=new, energy=energy))

        # the record shows this round's start-of-step state with the rates it measured
        seen = [replace(s, energy=replace(s.energy, e_init_ref=a.energy.e_init_ref)) for s, a in zip(states, after)]
        records.append(_snapshot(step, seen, cells, config, graph, measured, speeds))

        # weight update from the synchronous neighbour reports
        weights = _next_weights(config, after, cells, graph, k_w)
        states = [replace(a, weight=float(w)) for a, w in zip(after, weights)]
        step += 1

    last = records[-1].e_dots if records else [s.energy.e_dot_last for s in states]
    final = _snapshot(step, states, cells, config, graph, last, np.zeros(config.n))
    return SimTrace(config, records, final, reason, graph, lambda2, k_w)
