"""Scenario-catalog tests: variant enumeration, geometry, and determinism."""
import itertools
import json

import pytest

from socialnav import scenarios
from socialnav.scenarios import Asymmetry, ScenarioKind
from socialnav.world import PriorityType


@pytest.mark.parametrize("kind", list(ScenarioKind))
def test_suite_has_18_variants(kind):
    suite = scenarios.enumerate_suite(kind)
    assert len(suite) == 18
    # 6 ordered pairs of distinct priority types x 3 asymmetry settings.
    combos = {(s.priority_pair, s.asymmetry) for s in suite}
    assert len(combos) == 18
    pairs = {s.priority_pair for s in suite}
    expected = {p for p in itertools.permutations(list(PriorityType), 2)}
    assert pairs == expected
    assert {s.asymmetry for s in suite} == set(Asymmetry)


@pytest.mark.parametrize("kind", list(ScenarioKind))
def test_priority_pairs_always_distinct(kind):
    for s in scenarios.enumerate_suite(kind):
        assert s.priority_pair[0] != s.priority_pair[1]


def test_doorway_geometry_symmetric():
    spec = scenarios.variant_by_index(ScenarioKind.DOORWAY, 0)
    (a0, a1) = spec.agent_starts
    assert (a0.position.x, a0.position.y) == (-2.0, 0.5)
    assert (a1.position.x, a1.position.y) == (-2.0, -0.5)
    assert (spec.agent_goals[0].x, spec.agent_goals[0].y) == (1.0, -0.25)
    assert (spec.agent_goals[1].x, spec.agent_goals[1].y) == (1.0, 0.25)
    # Paths cross at the gap; the wall gap straddles y = 0.
    ys = {o.center.y for o in spec.obstacles}
    assert 0.0 not in ys


def test_intersection_geometry_symmetric():
    spec = scenarios.variant_by_index(ScenarioKind.INTERSECTION, 0)
    (a0, a1) = spec.agent_starts
    assert (a0.position.x, a0.position.y) == (-2.0, 0.0)
    assert (a1.position.x, a1.position.y) == (0.0, -2.0)
    assert (spec.agent_goals[0].x, spec.agent_goals[0].y) == (1.0, 0.0)
    assert (spec.agent_goals[1].x, spec.agent_goals[1].y) == (0.0, 1.0)


@pytest.mark.parametrize("kind", list(ScenarioKind))
def test_asymmetry_offsets_start_by_quarter_meter(kind):
    sym = scenarios.variant_by_index(kind, 0)
    back0 = scenarios.variant_by_index(kind, 1)
    back1 = scenarios.variant_by_index(kind, 2)
    assert back0.asymmetry is Asymmetry.AGENT0_BACK
    assert back1.asymmetry is Asymmetry.AGENT1_BACK
    d0 = sym.agent_starts[0].position.dist(back0.agent_starts[0].position)
    d1 = sym.agent_starts[1].position.dist(back1.agent_starts[1].position)
    assert d0 == pytest.approx(scenarios.ASYMMETRY_OFFSET)
    assert d1 == pytest.approx(scenarios.ASYMMETRY_OFFSET)


def test_agents_initially_face_their_goals():
    import math
    for kind in ScenarioKind:
        for spec in scenarios.enumerate_suite(kind):
            for i in (0, 1):
                to_goal = spec.agent_goals[i] - spec.agent_starts[i].position
                bearing = math.atan2(to_goal.y, to_goal.x)
                assert spec.agent_starts[i].heading == pytest.approx(bearing)


def test_task_strings_deterministic_in_seed():
    a = scenarios.enumerate_suite(ScenarioKind.DOORWAY, rng_seed=0)
    b = scenarios.enumerate_suite(ScenarioKind.DOORWAY, rng_seed=0)
    c = scenarios.enumerate_suite(ScenarioKind.DOORWAY, rng_seed=1)
    assert [s.task_strings for s in a] == [s.task_strings for s in b]
    # A different seed changes only the task phrasing, not the geometry.
    assert any(x.task_strings != y.task_strings for x, y in zip(a, c))
    for x, y in zip(a, c):
        assert x.agent_starts == y.agent_starts
        assert x.agent_goals == y.agent_goals
        assert x.priority_pair == y.priority_pair


def test_variant_by_index_bounds():
    with pytest.raises((IndexError, ValueError)):
        scenarios.variant_by_index(ScenarioKind.DOORWAY, 18)


def test_spec_serialization_round_trip(tmp_path):
    spec = scenarios.variant_by_index(ScenarioKind.INTERSECTION, 5)
    path = tmp_path / "scenario.json"
    scenarios.write_spec(path, spec)
    data = json.loads(path.read_text())
    assert data["kind"] == "intersection"
    assert len(data["obstacles"]) == len(spec.obstacles)
    assert data["task_strings"] == list(spec.task_strings)
