"""Doorway and intersection scenario suites (18 variants each).

Both scenario families put the agents on straight desired lines that cross at a
shared conflict point inside a 0.4 m opening. Goals sit 1 m past the opening so
the nominal time-to-goal matches the operating speeds; walls are rows of 0.1 m
discs. Variants: 6 ordered distinct priority pairs x {symmetric, agent 0 back,
agent 1 back}, with the offset agent moved 0.25 m farther from its goal.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from enum import Enum

from .negotiation import TASK_CATALOG
from .world import AgentState, Obstacle, PriorityType, Vec2

V_MAX = 0.3
OMEGA_MAX = 1.0
DT = 0.2
T_MAX = 15.0
AGENT_RADIUS = 0.1
BODY_LENGTH = 2 * AGENT_RADIUS
GOAL_TOLERANCE = 0.1
ASYMMETRY_OFFSET = 0.25
GAP_WIDTH = 0.4
WALL_DISC_RADIUS = 0.1


class ScenarioKind(Enum):
    DOORWAY = "doorway"
    INTERSECTION = "intersection"


class Asymmetry(Enum):
    SYMMETRIC = "symmetric"
    AGENT0_BACK = "agent0_back"
    AGENT1_BACK = "agent1_back"


@dataclass(frozen=True)
class ScenarioSpec:
    kind: ScenarioKind
    agent_starts: tuple  # 2 x AgentState
    agent_goals: tuple   # 2 x Vec2
    priority_pair: tuple  # 2 x PriorityType, distinct
    task_strings: tuple
    asymmetry: Asymmetry
    obstacles: tuple
    v_max: float = V_MAX
    omega_max: float = OMEGA_MAX
    dt: float = DT
    t_max: float = T_MAX

    @property
    def name(self) -> str:
        return (f"{self.kind.value}_{self.priority_pair[0].value}"
                f"_{self.priority_pair[1].value}_{self.asymmetry.value}")


def _heading_to(start: Vec2, goal: Vec2) -> float:
    return math.atan2(goal.y - start.y, goal.x - start.x)


def _draw_tasks(priority_pair, rng_seed: int) -> tuple:
    rng = random.Random(rng_seed)
    return tuple(rng.choice(TASK_CATALOG[p]) for p in priority_pair)


def _doorway_walls() -> tuple:
    # One row of touching discs each side of the 0.4 m gap, extending 1 m.
    ys = [0.3 + 0.2 * k for k in range(5)]
    return tuple(Obstacle(Vec2(0.0, s * y), WALL_DISC_RADIUS)
                 for s in (1.0, -1.0) for y in ys)


def _intersection_walls() -> tuple:
    # Four corridor edges bounding two 0.4 m lanes; open at the crossing.
    xs = [-2.1 + 0.2 * k for k in range(10)] + [0.3 + 0.2 * k for k in range(5)]
    obstacles = []
    for x in xs:
        obstacles.append(Obstacle(Vec2(x, 0.3), WALL_DISC_RADIUS))
        obstacles.append(Obstacle(Vec2(x, -0.3), WALL_DISC_RADIUS))
    for y in xs:
        obstacles.append(Obstacle(Vec2(0.3, y), WALL_DISC_RADIUS))
        obstacles.append(Obstacle(Vec2(-0.3, y), WALL_DISC_RADIUS))
    return tuple(obstacles)


def build_doorway(priority_pair, asymmetry: Asymmetry, rng_seed: int) -> ScenarioSpec:
    """Doorway: starts 2 m left of the gap plane, 0.5 m north/south; goals 1 m past
    the plane, mirrored so both desired lines cross at the gap center."""
    if priority_pair[0] == priority_pair[1]:
        raise ValueError("priority types must be distinct")
    starts_xy = [Vec2(-2.0, 0.5), Vec2(-2.0, -0.5)]
    goals = (Vec2(1.0, -0.25), Vec2(1.0, 0.25))
    if asymmetry is Asymmetry.AGENT0_BACK:
        starts_xy[0] = Vec2(-2.0 - ASYMMETRY_OFFSET, 0.5)
    elif asymmetry is Asymmetry.AGENT1_BACK:
        starts_xy[1] = Vec2(-2.0 - ASYMMETRY_OFFSET, -0.5)
    starts = tuple(AgentState(p, _heading_to(p, g)) for p, g in zip(starts_xy, goals))
    return ScenarioSpec(ScenarioKind.DOORWAY, starts, goals, tuple(priority_pair),
                        _draw_tasks(priority_pair, rng_seed), asymmetry,
                        _doorway_walls())


def build_intersection(priority_pair, asymmetry: Asymmetry, rng_seed: int) -> ScenarioSpec:
    """Intersection: perpendicular 0.4 m lanes; starts 2 m from the crossing,
    goals 1 m beyond it on the same arm."""
    if priority_pair[0] == priority_pair[1]:
        raise ValueError("priority types must be distinct")
    starts_xy = [Vec2(-2.0, 0.0), Vec2(0.0, -2.0)]
    goals = (Vec2(1.0, 0.0), Vec2(0.0, 1.0))
    if asymmetry is Asymmetry.AGENT0_BACK:
        starts_xy[0] = Vec2(-2.0 - ASYMMETRY_OFFSET, 0.0)
    elif asymmetry is Asymmetry.AGENT1_BACK:
        starts_xy[1] = Vec2(0.0, -2.0 - ASYMMETRY_OFFSET)
    starts = tuple(AgentState(p, _heading_to(p, g)) for p, g in zip(starts_xy, goals))
    return ScenarioSpec(ScenarioKind.INTERSECTION, starts, goals, tuple(priority_pair),
                        _draw_tasks(priority_pair, rng_seed), asymmetry,
                        _intersection_walls())


def enumerate_suite(kind: ScenarioKind, rng_seed: int = 0) -> list[ScenarioSpec]:
    """All 18 variants: 6 ordered distinct priority pairs x 3 position variants."""
    builder = build_doorway if kind is ScenarioKind.DOORWAY else build_intersection
    types = [PriorityType.HOSPITAL, PriorityType.AIRPORT, PriorityType.GROCERY]
    specs = []
    index = 0
    for a in types:
        for b in types:
            if a == b:
                continue
            for asym in Asymmetry:
                specs.append(builder((a, b), asym, rng_seed * 1000 + index))
                index += 1
    return specs


def variant_by_index(kind: ScenarioKind, index: int, rng_seed: int = 0) -> ScenarioSpec:
    suite = enumerate_suite(kind, rng_seed)
    if not 0 <= index < len(suite):
        raise ValueError(f"variant index out of range: {index}")
    return suite[index]


def spec_to_dict(spec: ScenarioSpec) -> dict:
    return {
        "kind": spec.kind.value,
        "asymmetry": spec.asymmetry.value,
        "priority_pair": [p.value for p in spec.priority_pair],
        "task_strings": list(spec.task_strings),
        "agent_starts": [[s.position.x, s.position.y, s.heading] for s in spec.agent_starts],
        "agent_goals": [[g.x, g.y] for g in spec.agent_goals],
        "obstacles": [[o.center.x, o.center.y, o.radius] for o in spec.obstacles],
        "v_max": spec.v_max, "omega_max": spec.omega_max,
        "dt": spec.dt, "t_max": spec.t_max,
    }


def write_spec(path, spec: ScenarioSpec) -> None:
    with open(path, "w") as f:
        json.dump(spec_to_dict(spec), f, indent=2)
