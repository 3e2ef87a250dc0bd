from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from energy_coverage.controllers import CONTROLLERS, Gains
from energy_coverage.density import DensityField
from energy_coverage.energy import EnergyProfile, Segment
from energy_coverage.engine import RobotSpec, ScenarioConfig
from energy_coverage.geometry import ConvexPolygon
from energy_coverage.graph import GraphPolicy
from energy_coverage.scenario import BUNDLED, ScenarioError, bundled_text, load_scenario, parse_scenario, serialize_scenario

S1 = bundled_text("scenario1")


def test_scenario1_contents():
    cfg = parse_scenario(S1)
    assert cfg.n == 6
    assert [r.profile.schedule[0].alpha for r in cfg.robots] == [1, 1, 1, 1, 5, 1]
    assert all(r.profile.schedule[0].beta == 1 for r in cfg.robots)
    assert all(r.profile.e_init == 100 for r in cfg.robots)
    assert cfg.domain.bounds == (0, 0, 6, 6)
    assert cfg.graph.kind == "complete"


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_round_trip(name):
    cfg = load_scenario(name)
    assert parse_scenario(serialize_scenario(cfg)) == cfg


def error_for(text):
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(text)
    return exc.value


def test_alpha_zero_names_invariant_and_line():
    err = error_for(S1.replace("alpha: 5", "alpha: 0"))
    assert err.key == "robots[4].alpha"
    assert "alpha must be > 0" in str(err)
    assert S1.splitlines()[err.line - 1].strip().startswith("alpha: 5")


def test_unknown_key_listed():
    err = error_for(S1.replace("controller: EAC", "controler: EAC"))
    assert err.key == "controler" and "unknown key" in str(err)


def test_missing_field():
    err = error_for(S1.replace("    e_init: 100\n", "", 1))
    assert err.key == "robots[0].e_init" and "missing" in str(err)


def test_empty_robots_rejected():
    err = error_for(S1.split("robots:")[0] + "robots: []\n")
    assert err.key == "robots"


def test_disconnected_graph_rejected():
    err = error_for(S1.replace("policy: complete", "policy: disk\n  radius: 0.5"))
    assert err.key == "graph" and "connected" in str(err)


def test_syntax_error_has_line():
    err = error_for("domain: [1, 2\nrobots: x\n")
    assert err.line is not None


def test_schedule_segment_error_points_at_entry():
    text = bundled_text("scenario3").replace("{from_step: 11, alpha: 1, beta: 5}", "{from_step: 11, alpha: -1, beta: 5}", 1)
    err = error_for(text)
    assert err.key == "robots[0].schedule[1].alpha"


def test_type_errors():
    assert error_for(S1.replace("max_steps: 500", "max_steps: lots")).key == "run.max_steps"
    assert error_for(S1.replace("rectangle: [0, 0, 6, 6]", "rectangle: [0, 0, 6]")).key == "domain.rectangle"
    assert error_for(S1.replace("controller: EAC", "controller: FOO")).key == "controller"


def test_load_missing_file():
    with pytest.raises(ScenarioError):
        load_scenario("/nonexistent/scenario.yaml")


def test_defaults_applied():
    minimal = "domain: {rectangle: [0, 0, 6, 6]}\nrobots:\n  - {position: [1, 1], e_init: 100, alpha: 1, beta: 1}\n"
    cfg = parse_scenario(minimal)
    assert cfg.gains == Gains() and cfg.controller == "EAC" and cfg.max_steps == 500
    assert cfg.density == DensityField.uniform() and cfg.two_sided_reset


coords = st.floats(0.1, 9.9, allow_nan=False)


@st.composite
def configs(draw):
    n = draw(st.integers(1, 5))
    pts = draw(st.lists(st.tuples(coords, coords), min_size=n, max_size=n, unique=True))
    robots = []
    for p in pts:
        segs = draw(st.lists(st.tuples(st.floats(0.01, 5), st.floats(0, 5)), min_size=1, max_size=3))
        sched = tuple(Segment(10 * k, a, b) for k, (a, b) in enumerate(segs))
        pos = None if draw(st.booleans()) and n == 1 else p
        robots.append(RobotSpec(EnergyProfile(draw(st.floats(1, 100)), sched), pos))
    density = draw(st.sampled_from([DensityField.uniform(), DensityField.bimodal()]))
    return ScenarioConfig(
        ConvexPolygon.rectangle(0, 0, 10, 10),
        tuple(robots),
        density=density,
        controller=draw(st.sampled_from(CONTROLLERS)),
        gains=Gains(k_p=draw(st.floats(0.1, 2)), k_w=draw(st.none() | st.floats(0.01, 3))),
        max_steps=draw(st.integers(0, 1000)),
        seed=draw(st.integers(0, 2**32)),
        two_sided_reset=draw(st.booleans()),
        name=draw(st.sampled_from(["", "x", "study"])),
    )


@settings(max_examples=50, deadline=None)
@given(configs())
def test_round_trip_property(cfg):
    text = serialize_scenario(cfg)
    assert parse_scenario(text) == cfg
    assert serialize_scenario(parse_scenario(text)) == text


def test_polygon_domain_round_trip():
    hexagon = ConvexPolygon([[2, 0], [4, 0], [6, 3], [4, 6], [2, 6], [0, 3]])
    cfg = ScenarioConfig(hexagon, (RobotSpec(EnergyProfile.constant(100, 1, 1), (3.0, 3.0)),),
                         graph=GraphPolicy("disk", 2.0))
    assert parse_scenario(serialize_scenario(cfg)) == cfg
