"""Fixed-step world model: agent state, unicycle integration, input clamping, goal tests."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Normalize an angle into (-pi, pi]."""
    a = math.fmod(a, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    elif a > math.pi:
        a -= TWO_PI
    return a


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)


class PriorityType(Enum):
    HOSPITAL = "hospital"
    AIRPORT = "airport"
    GROCERY = "grocery"


@dataclass(frozen=True)
class AgentState:
    position: Vec2
    heading: float  # radians, kept in (-pi, pi]

    def heading_vec(self) -> Vec2:
        return Vec2(math.cos(self.heading), math.sin(self.heading))


@dataclass(frozen=True)
class ControlInput:
    linear_velocity: float
    angular_velocity: float

    def is_finite(self) -> bool:
        return math.isfinite(self.linear_velocity) and math.isfinite(self.angular_velocity)


STOP = ControlInput(0.0, 0.0)


@dataclass(frozen=True)
class AgentParams:
    radius: float
    body_length: float  # disc diameter: body_length == 2 * radius
    v_max: float
    omega_max: float
    priority_type: PriorityType
    task_string: str
    goal: Vec2
    goal_tolerance: float = 0.1


@dataclass(frozen=True)
class Obstacle:
    center: Vec2
    radius: float


@dataclass
class WorldState:
    time: float
    agents: list  # list[tuple[AgentState, AgentParams]], exactly two entries
    obstacles: list  # list[Obstacle]
    dt: float
    # Last commanded input per agent; part of what each agent observes about the other.
    last_inputs: list = field(default_factory=lambda: [STOP, STOP])


def step_dynamics(state: AgentState, u: ControlInput, dt: float) -> AgentState:
    """Forward-Euler unicycle step; heading renormalized into (-pi, pi]."""
    if not u.is_finite():
        raise ValueError(f"non-finite control input: {u}")
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    v, w = u.linear_velocity, u.angular_velocity
    p = state.position
    new_pos = Vec2(p.x + v * math.cos(state.heading) * dt,
                   p.y + v * math.sin(state.heading) * dt)
    return AgentState(new_pos, wrap_angle(state.heading + w * dt))


def clamp_input(u: ControlInput, params: AgentParams, v_cap: float | None = None) -> ControlInput:
    """Clamp v into [0, v_cap] and omega into [-omega_max, omega_max]."""
    cap = params.v_max if v_cap is None else v_cap
    v = min(max(u.linear_velocity, 0.0), cap)
    w = min(max(u.angular_velocity, -params.omega_max), params.omega_max)
    return ControlInput(v, w)


def goal_reached(state: AgentState, params: AgentParams) -> bool:
    """True once the agent is within goal_tolerance of its goal (boundary inclusive)."""
    return state.position.dist(params.goal) <= params.goal_tolerance
