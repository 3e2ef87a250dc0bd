from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import cached_run
from energy_coverage.controllers import Gains
from energy_coverage.energy import EnergyProfile, EnergyState, Segment, energy_replay
from energy_coverage.engine import (
    ALL_AT_CENTROID,
    ENERGY_DEPLETED,
    STEP_CAP,
    RobotSpec,
    RobotState,
    ScenarioConfig,
    apply_schedule,
    run_scenario,
    termination_check,
)
from energy_coverage.geometry import ConvexPolygon, PowerCell
from energy_coverage.graph import DisconnectedGraphError, GraphPolicy
from energy_coverage.scenario import load_scenario

SQ6 = ConvexPolygon.rectangle(0, 0, 6, 6)


def robot(pos=None, e=100.0, a=1.0, b=1.0):
    return RobotSpec(EnergyProfile.constant(e, a, b), pos)


def replay_energies(trace, i):
    """Energies re-integrated from the profile, the speed model and the recorded speeds."""
    cfg = trace.config
    prof = cfg.robots[i].profile
    rates = []
    for rec in trace.records:
        seg = prof.segment_at(rec.step)
        speed = cfg.gains.v_max if cfg.speed_model == "nominal" else rec.speeds[i]
        rates.append(seg.alpha + seg.beta * speed)
    return energy_replay(prof.e_init, rates, cfg.gains.dt)


def test_scenario0_equal_weights_and_areas():
    tr = cached_run("scenario0")
    assert tr.reason == ALL_AT_CENTROID
    assert np.allclose(tr.final.weights, 1.0, atol=1e-3)
    assert np.allclose(tr.final.areas, 6.0, atol=0.1)


def test_single_robot_goes_to_domain_centroid():
    tr = run_scenario(ScenarioConfig(SQ6, (robot((0.5, 5.0)),)))
    assert tr.reason == ALL_AT_CENTROID
    assert np.hypot(*(tr.final.positions[0] - [3.0, 3.0])) <= 0.01


@pytest.mark.parametrize("name", ["scenario1", "scenario2", "scenario3"])
def test_replay_consistency(name):
    tr = cached_run(name)
    energies = np.array([r.energies for r in tr.records] + [tr.final.energies])
    for i in range(tr.config.n):
        assert list(energies[:, i]) == replay_energies(tr, i)


def test_replay_consistency_measured_speed():
    cfg = replace(load_scenario("scenario1"), speed_model="measured")
    tr = run_scenario(cfg)
    energies = np.array([r.energies for r in tr.records] + [tr.final.energies])
    assert list(energies[:, 4]) == replay_energies(tr, 4)


def test_online_rate_matches_model_while_powered():
    tr = cached_run("scenario3")
    for rec in tr.records[:-1]:
        for i, spec in enumerate(tr.config.robots):
            seg = spec.profile.segment_at(rec.step)
            assert rec.e_dots[i] == pytest.approx(seg.alpha + seg.beta * 0.4, abs=1e-9)


def test_trace_invariants():
    tr = cached_run("scenario1")
    steps = [r.step for r in tr.records]
    assert steps == list(range(tr.steps))
    assert tr.final.step == tr.steps
    for rec in tr.records:
        assert np.all(SQ6.contains(rec.positions))
        assert np.all(rec.weights >= 0.05)
        assert rec.areas.sum() == pytest.approx(36.0, rel=1e-9)
        assert rec.convergence_cost >= 0.0


def test_resets_restore_common_reference_in_scenario3():
    tr = cached_run("scenario3")
    refs = tr.series("e_refs")
    assert refs[10] == pytest.approx([100.0] * 6)
    # the flip at step 11 re-anchors everyone to the energy left after step 11
    assert refs[11] == pytest.approx([84.6, 84.6, 67.0, 67.0, 84.6, 84.6])
    assert refs[22] == pytest.approx([51.6] * 6)


def test_apply_schedule_examples():
    cfg = load_scenario("scenario3")
    def state(i):
        return RobotState(i, np.zeros(2), 1.0, EnergyState.fresh(100, 1.4), cfg.robots[i].profile, 0.0, 0.0)
    assert apply_schedule(state(0), 10).beta == 1
    assert apply_schedule(state(0), 11).beta == 5
    assert apply_schedule(state(2), 22).beta == 5
    single = RobotState(0, np.zeros(2), 1.0, EnergyState.fresh(100, 1.4),
                        EnergyProfile.constant(100, 2.0, 3.0), 0.0, 0.0)
    assert (apply_schedule(single, 999).alpha, apply_schedule(single, 999).beta) == (2.0, 3.0)


def _st(pos, e):
    return RobotState(0, np.array(pos, float), 1.0, EnergyState(e, 1.4, 1.4, 100.0),
                      EnergyProfile.constant(100, 1, 1), 1.0, 1.0)


def test_termination_check_examples():
    cell = PowerCell(0, SQ6, 36.0, np.array([3.0, 3.0]))
    g = Gains()
    assert termination_check([_st((3, 3), 90)], [cell], g) == ALL_AT_CENTROID
    assert termination_check([_st((3, 3), 0.5)], [cell], g) == ENERGY_DEPLETED
    assert termination_check([_st((1, 1), 90)], [cell], g, step=5, max_steps=5) == STEP_CAP
    assert termination_check([_st((1, 1), 90)], [cell], g, step=4, max_steps=5) is None


def test_empty_cell_robot_holds_position():
    # robot 1 sits next to a far heavier robot and starts with an empty cell
    cfg = ScenarioConfig(SQ6, (robot((3.0, 3.0)), robot((3.1, 3.0))), max_steps=3,
                         controller="WMTC", terminate_on_convergence=False)
    tr = run_scenario(replace(cfg, controller="EAC"))
    assert tr.steps == 3


def test_rejections_before_step_zero():
    with pytest.raises(ValueError, match="distinct"):
        ScenarioConfig(SQ6, (robot((1.0, 1.0)), robot((1.0, 1.0))))
    with pytest.raises(ValueError):
        ScenarioConfig(SQ6, ())
    with pytest.raises(ValueError):
        ScenarioConfig(SQ6, (robot((9.0, 1.0)),))
    with pytest.raises(DisconnectedGraphError):
        run_scenario(ScenarioConfig(SQ6, (robot((0.5, 0.5)), robot((5.5, 5.5))), graph=GraphPolicy("disk", 1.0)))


def test_zero_step_run():
    tr = run_scenario(ScenarioConfig(SQ6, (robot((1.0, 1.0)),), max_steps=0))
    assert tr.steps == 0 and tr.reason == STEP_CAP
    assert tr.final.weights.tolist() == [1.0]


def test_random_placement_is_seeded():
    cfg = ScenarioConfig(SQ6, tuple(robot() for _ in range(5)), seed=7)
    assert np.array_equal(cfg.initial_positions(), replace(cfg).initial_positions())
    assert not np.array_equal(cfg.initial_positions(), replace(cfg, seed=8).initial_positions())
    assert np.all(SQ6.contains(cfg.initial_positions()))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from(["EAC", "ATC", "WMTC", "PBC"]))
def test_determinism(seed, controller):
    robots = tuple(robot(a=a) for a in (1.0, 2.0, 3.0, 1.5))
    cfg = ScenarioConfig(SQ6, robots, controller=controller, seed=seed, max_steps=15)
    a, b = run_scenario(cfg), run_scenario(cfg)
    assert a.steps == b.steps and a.reason == b.reason
    for ra, rb in zip(a.records + [a.final], b.records + [b.final]):
        for field in ("positions", "weights", "energies", "e_dots", "areas", "masses"):
            assert np.array_equal(getattr(ra, field), getattr(rb, field))
        assert ra.locational_cost == rb.locational_cost


def test_pbc_weights_follow_energy():
    tr = cached_run("scenario1", "PBC")
    for prev, rec in zip(tr.records, tr.records[1:]):
        assert rec.weights == pytest.approx(rec.energies / 100.0 - 1.0)
