"""YAML scenario files: parsing with line-numbered errors, and serialization.

A scenario file looks like::

    name: scenario1
    domain:
      rectangle: [0, 0, 6, 6]          # or  polygon: [[x, y], ...]
    density:
      kind: uniform                    # or gaussian-mixture with floor/components
    robots:
      - position: [2.25, 2.0]          # omit for a seeded random placement
        e_init: 100
        alpha: 1                       # shorthand for a one-segment schedule
        beta: 1
      - position: [3.75, 2.0]
        e_init: 100
        schedule:
          - {from_step: 0, alpha: 1, beta: 1}
          - {from_step: 11, alpha: 1, beta: 5}
    graph: {policy: complete}          # or {policy: disk, radius: 12.0, frozen: true}
    controller: EAC
    gains: {k_p: 1.0, k_w: 0.6}        # every gain optional
    rate_reset: {threshold: 0.2, two_sided: true}
    run: {max_steps: 500, seed: 0, speed_model: nominal, terminate_on_convergence: true, e_max: 100}
"""

from __future__ import annotations

import dataclasses
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Optional

import yaml

from .controllers import Gains
from .density import DensityField, GaussianBump
from .energy import EnergyProfile, Segment
from .engine import RobotSpec, ScenarioConfig
from .geometry import ConvexPolygon
from .graph import DisconnectedGraphError, GraphPolicy, build_graph

BUNDLED = ("scenario0", "scenario1", "scenario2", "scenario3", "appendix_bimodal", "connectivity_n20", "connectivity_n100")


class ScenarioError(ValueError):
    """A scenario file is malformed or violates a model invariant."""

    def __init__(self, message: str, key: str = "", line: Optional[int] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key:
            where.append(f"key '{key}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.key = key
        self.line = line


class _Map(dict):
    line: int = 0
    lines: dict


class _Seq(list):
    line: int = 0


class _Loader(yaml.SafeLoader):
    """SafeLoader that remembers where every mapping, sequence and key starts."""


def _construct_map(loader: _Loader, node: yaml.MappingNode) -> _Map:
    out = _Map()
    out.line = node.start_mark.line + 1
    out.lines = {}
    for key_node, value_node in node.value:
        key = loader.construct_object(key_node, deep=True)
        if key in out:
            raise ScenarioError("duplicate key", str(key), key_node.start_mark.line + 1)
        out[key] = loader.construct_object(value_node, deep=True)
        out.lines[key] = key_node.start_mark.line + 1
    return out


def _construct_seq(loader: _Loader, node: yaml.SequenceNode) -> _Seq:
    out = _Seq(loader.construct_object(child, deep=True) for child in node.value)
    out.line = node.start_mark.line + 1
    return out


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_map)
_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_SEQUENCE_TAG, _construct_seq)


class _Section:
    """Typed access to one mapping, tracking its dotted path for error messages."""

    def __init__(self, data: Any, path: str, line: Optional[int], allowed: tuple[str, ...]):
        if not isinstance(data, dict):
            raise ScenarioError("expected a mapping", path, line)
        self.data = data
        self.path = path
        self.line = getattr(data, "line", line)
        unknown = [k for k in data if k not in allowed]
        if unknown:
            k = unknown[0]
            raise ScenarioError(f"unknown key (allowed: {', '.join(allowed)})", self._key(k), self.line_of(k))

    def _key(self, k: str) -> str:
        return f"{self.path}.{k}" if self.path else str(k)

    def line_of(self, k: str) -> Optional[int]:
        return getattr(self.data, "lines", {}).get(k, self.line)

    def has(self, k: str) -> bool:
        return k in self.data

    def raw(self, k: str, default: Any = ...) -> Any:
        if k not in self.data:
            if default is ...:
                raise ScenarioError("missing required field", self._key(k), self.line)
            return default
        return self.data[k]

    def number(self, k: str, default: Any = ...) -> Any:
        v = self.raw(k, default)
        if v is None and default is None:
            return None
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ScenarioError(f"expected a number, got {v!r}", self._key(k), self.line_of(k))
        return float(v)

    def integer(self, k: str, default: Any = ...) -> int:
        v = self.raw(k, default)
        if isinstance(v, bool) or not isinstance(v, int):
            raise ScenarioError(f"expected an integer, got {v!r}", self._key(k), self.line_of(k))
        return v

    def boolean(self, k: str, default: Any = ...) -> bool:
        v = self.raw(k, default)
        if not isinstance(v, bool):
            raise ScenarioError(f"expected true/false, got {v!r}", self._key(k), self.line_of(k))
        return v

    def string(self, k: str, default: Any = ...) -> str:
        v = self.raw(k, default)
        if not isinstance(v, str):
            raise ScenarioError(f"expected a string, got {v!r}", self._key(k), self.line_of(k))
        return v

    def points(self, k: str, count: Optional[int] = None) -> list[tuple[float, ...]]:
        v = self.raw(k)
        line = getattr(v, "line", self.line_of(k))
        ok = isinstance(v, list) and all(
            isinstance(p, list) and len(p) == 2 and all(_is_num(c) for c in p) for p in v
        )
        if not ok or (count is not None and len(v) != count):
            raise ScenarioError("expected a list of [x, y] pairs", self._key(k), line)
        return [(float(p[0]), float(p[1])) for p in v]

    def sub(self, k: str, allowed: tuple[str, ...], default: Any = ...) -> Optional["_Section"]:
        v = self.raw(k, default)
        if v is None:
            return None
        return _Section(v, self._key(k), self.line_of(k), allowed)

    def build(self, k: Optional[str], fn: Callable[[], Any]) -> Any:
        """Run a constructor, re-raising its invariant violation with our location."""
        try:
            return fn()
        except ScenarioError:
            raise
        except ValueError as exc:
            key = self._key(k) if k else self.path
            raise ScenarioError(str(exc), key, self.line_of(k) if k else self.line) from None


def _is_num(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _vector(sec: _Section, k: str, n: int) -> tuple[float, ...]:
    v = sec.raw(k)
    if not (isinstance(v, list) and len(v) == n and all(_is_num(c) for c in v)):
        raise ScenarioError(f"expected a list of {n} numbers", sec._key(k), sec.line_of(k))
    return tuple(float(c) for c in v)


def _parse_domain(root: _Section) -> ConvexPolygon:
    sec = root.sub("domain", ("rectangle", "polygon"))
    if sec.has("rectangle") == sec.has("polygon"):
        raise ScenarioError("give exactly one of 'rectangle' or 'polygon'", sec.path, sec.line)
    if sec.has("rectangle"):
        xmin, ymin, xmax, ymax = _vector(sec, "rectangle", 4)
        if not (xmax > xmin and ymax > ymin):
            raise ScenarioError("rectangle needs xmin < xmax and ymin < ymax", sec._key("rectangle"),
                                sec.line_of("rectangle"))
        return ConvexPolygon.rectangle(xmin, ymin, xmax, ymax)
    pts = sec.points("polygon")
    return sec.build("polygon", lambda: ConvexPolygon(pts))


def _parse_density(root: _Section) -> DensityField:
    sec = root.sub("density", ("kind", "floor", "components"), default=None)
    if sec is None:
        return DensityField()
    kind = sec.string("kind")
    if kind == "uniform":
        for k in ("floor", "components"):
            if sec.has(k):
                raise ScenarioError("not used by a uniform density", sec._key(k), sec.line_of(k))
        return DensityField()
    if kind != "gaussian-mixture":
        raise ScenarioError("kind must be 'uniform' or 'gaussian-mixture'", sec._key("kind"), sec.line_of("kind"))
    raw = sec.raw("components")
    if not isinstance(raw, list):
        raise ScenarioError("expected a list", sec._key("components"), sec.line_of("components"))
    comps = []
    for i, item in enumerate(raw):
        c = _Section(item, f"{sec.path}.components[{i}]", sec.line_of("components"), ("mean", "covariance", "weight"))
        mean = _vector(c, "mean", 2)
        cov = c.points("covariance", count=2)
        weight = c.number("weight", 1.0)
        comps.append(c.build(None, lambda: GaussianBump(mean, (cov[0], cov[1]), weight)))
    floor = sec.number("floor", 0.01)
    return sec.build(None, lambda: DensityField.mixture(comps, floor))


def _parse_profile(r: _Section) -> EnergyProfile:
    e_init = r.number("e_init")
    if r.has("schedule"):
        for k in ("alpha", "beta"):
            if r.has(k):
                raise ScenarioError("give either 'schedule' or 'alpha'/'beta', not both", r._key(k), r.line_of(k))
        raw = r.raw("schedule")
        if not isinstance(raw, list) or not raw:
            raise ScenarioError("expected a non-empty list", r._key("schedule"), r.line_of("schedule"))
        segs = []
        for j, item in enumerate(raw):
            s = _Section(item, f"{r.path}.schedule[{j}]", getattr(raw, "line", r.line), ("from_step", "alpha", "beta"))
            seg = Segment(s.integer("from_step"), s.number("alpha"), s.number("beta"))
            # validate each segment on its own so the error points at the offending entry
            s.build("alpha" if not seg.alpha > 0 else "beta",
                    lambda: EnergyProfile.constant(100.0, seg.alpha, seg.beta))
            segs.append(seg)
        return r.build("schedule", lambda: EnergyProfile(e_init, tuple(segs)))
    alpha, beta = r.number("alpha"), r.number("beta")
    key = "e_init" if not 0.0 < e_init <= 100.0 else ("alpha" if not alpha > 0 else "beta")
    return r.build(key, lambda: EnergyProfile.constant(e_init, alpha, beta))


def _parse_robots(root: _Section) -> tuple[RobotSpec, ...]:
    raw = root.raw("robots")
    line = root.line_of("robots")
    if not isinstance(raw, list) or not raw:
        raise ScenarioError("need a non-empty list of robots", "robots", line)
    robots = []
    for i, item in enumerate(raw):
        r = _Section(item, f"robots[{i}]", line, ("position", "e_init", "alpha", "beta", "schedule"))
        pos = _vector(r, "position", 2) if r.has("position") else None
        robots.append(RobotSpec(_parse_profile(r), pos))
    return tuple(robots)


def _parse_graph(root: _Section) -> GraphPolicy:
    sec = root.sub("graph", ("policy", "radius", "frozen"), default=None)
    if sec is None:
        return GraphPolicy()
    policy = sec.string("policy", "complete")
    radius = sec.number("radius", None)
    frozen = sec.boolean("frozen", True)
    return sec.build("radius" if policy == "disk" else "policy", lambda: GraphPolicy(policy, radius, frozen))


def _parse_gains(root: _Section) -> Gains:
    names = tuple(f.name for f in dataclasses.fields(Gains))
    sec = root.sub("gains", names, default=None)
    if sec is None:
        return Gains()
    kwargs = {k: sec.number(k) for k in names if sec.has(k)}
    bad = next((k for k, v in kwargs.items() if not v > 0), None)
    return sec.build(bad, lambda: Gains(**kwargs))


def parse_scenario(text: str, check_graph: bool = True) -> ScenarioConfig:
    """Parse and validate a scenario document.

    With ``check_graph`` the communication graph over the initial positions
    must be connected.
    """
    try:
        data = yaml.load(text, Loader=_Loader)
    except ScenarioError:
        raise
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ScenarioError(f"YAML syntax error: {getattr(exc, 'problem', exc)}", "",
                            mark.line + 1 if mark else None) from None
    if data is None:
        raise ScenarioError("empty scenario file")
    root = _Section(data, "", 1, ("name", "domain", "density", "robots", "graph", "controller", "gains",
                                  "rate_reset", "run"))
    domain = _parse_domain(root)
    density = _parse_density(root)
    robots = _parse_robots(root)
    graph = _parse_graph(root)
    controller = root.string("controller", "EAC")
    gains = _parse_gains(root)
    reset = root.sub("rate_reset", ("threshold", "two_sided"), default=None)
    run = root.sub("run", ("max_steps", "seed", "speed_model", "terminate_on_convergence", "e_max"), default=None)

    kwargs: dict[str, Any] = dict(domain=domain, robots=robots, density=density, graph=graph,
                                  controller=controller, gains=gains, name=root.string("name", ""))
    if reset is not None:
        if reset.has("threshold"):
            kwargs["rate_threshold"] = reset.number("threshold")
        if reset.has("two_sided"):
            kwargs["two_sided_reset"] = reset.boolean("two_sided")
    if run is not None:
        for k, get in (("max_steps", run.integer), ("seed", run.integer), ("speed_model", run.string),
                       ("terminate_on_convergence", run.boolean), ("e_max", run.number)):
            if run.has(k):
                kwargs[k] = get(k)
    try:
        config = ScenarioConfig(**kwargs)
    except ValueError as exc:
        msg = str(exc)
        key = next((k for k in ("controller", "speed_model", "max_steps", "e_max", "rate_threshold") if k in msg),
                   "robots")
        line = root.line_of(key) if key in ("controller", "robots") else None
        raise ScenarioError(msg, key, line) from None
    if check_graph:
        try:
            build_graph(config.initial_positions(), config.graph)
        except DisconnectedGraphError as exc:
            raise ScenarioError(f"{exc} (invariant: graph connected at start)", "graph",
                                root.line_of("graph") if root.has("graph") else None) from None
    return config


def load_scenario(path_or_name: str | Path, check_graph: bool = True) -> ScenarioConfig:
    """Load a scenario from a file path or a bundled scenario name."""
    path = Path(path_or_name)
    if not path.exists() and str(path_or_name) in BUNDLED:
        return parse_scenario(bundled_text(str(path_or_name)), check_graph)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc.strerror}", str(path)) from None
    return parse_scenario(text, check_graph)


def bundled_text(name: str) -> str:
    if name not in BUNDLED:
        raise ScenarioError(f"no bundled scenario named {name!r}; choose from {', '.join(BUNDLED)}")
    return resources.files("energy_coverage").joinpath("scenarios", f"{name}.yaml").read_text(encoding="utf-8")


def scenario_to_dict(config: ScenarioConfig) -> dict:
    xmin, ymin, xmax, ymax = config.domain.bounds
    rect = ConvexPolygon.rectangle(xmin, ymin, xmax, ymax)
    if rect == config.domain:
        domain: dict = {"rectangle": [xmin, ymin, xmax, ymax]}
    else:
        domain = {"polygon": [[float(x), float(y)] for x, y in config.domain.vertices]}
    if config.density.is_uniform:
        density: dict = {"kind": "uniform"}
    else:
        density = {
            "kind": "gaussian-mixture",
            "floor": config.density.floor,
            "components": [
                {"mean": list(c.mean), "covariance": [list(r) for r in c.covariance], "weight": c.weight}
                for c in config.density.components
            ],
        }
    robots = []
    for spec in config.robots:
        entry: dict = {}
        if spec.position is not None:
            entry["position"] = [float(spec.position[0]), float(spec.position[1])]
        entry["e_init"] = float(spec.profile.e_init)
        sched = spec.profile.schedule
        if len(sched) == 1:
            entry["alpha"], entry["beta"] = float(sched[0].alpha), float(sched[0].beta)
        else:
            entry["schedule"] = [{"from_step": s.from_step, "alpha": float(s.alpha), "beta": float(s.beta)}
                                 for s in sched]
        robots.append(entry)
    graph: dict = {"policy": config.graph.kind}
    if config.graph.radius is not None:
        graph["radius"] = float(config.graph.radius)
    graph["frozen"] = config.graph.frozen
    gains = {f.name: getattr(config.gains, f.name) for f in dataclasses.fields(Gains)}
    gains = {k: float(v) for k, v in gains.items() if v is not None}
    out: dict = {}
    if config.name:
        out["name"] = config.name
    out.update(
        domain=domain,
        density=density,
        robots=robots,
        graph=graph,
        controller=config.controller,
        gains=gains,
        rate_reset={"threshold": float(config.rate_threshold), "two_sided": config.two_sided_reset},
        run={
            "max_steps": config.max_steps,
            "seed": config.seed,
            "speed_model": config.speed_model,
            "terminate_on_convergence": config.terminate_on_convergence,
            "e_max": float(config.e_max),
        },
    )
    return out


def serialize_scenario(config: ScenarioConfig) -> str:
    return yaml.safe_dump(scenario_to_dict(config), sort_keys=False, default_flow_style=None)
