"""Conflict (social mini-game) detection: forward-ray intersection, occupancy timing."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .world import AgentState, Vec2, WorldState

_PARALLEL_EPS = 1e-12


@dataclass(frozen=True)
class SmgStatus:
    q_point: Optional[Vec2]
    d_self: float
    d_other: float
    enter_self: float
    exit_self: float
    enter_other: float
    exit_other: float
    active: bool

    def swapped(self) -> "SmgStatus":
        return SmgStatus(self.q_point, self.d_other, self.d_self,
                         self.enter_other, self.exit_other,
                         self.enter_self, self.exit_self, self.active)


def ray_intersection(a: AgentState, b: AgentState) -> Optional[Vec2]:
    """Intersection of the two forward rays, or None if parallel or behind either agent."""
    ua, ub = a.heading_vec(), b.heading_vec()
    denom = ua.cross(ub)
    if abs(denom) < _PARALLEL_EPS:
        return None
    d = b.position - a.position
    t = d.cross(ub) / denom  # parameter along a's ray
    s = d.cross(ua) / denom  # parameter along b's ray
    if t <= 0.0 or s <= 0.0:
        return None
    return a.position + ua.scaled(t)


def occupancy_interval(d: float, v: float, l: float) -> tuple[float, float]:
    """Time window [d/v, (d+l)/v] during which a body of length l covers the conflict point."""
    if v <= 0.0:
        raise ValueError(f"speed must be positive, got {v}")
    if d < 0.0:
        raise ValueError(f"distance must be nonnegative, got {d}")
    return d / v, (d + l) / v


def detect_smg(world: WorldState, self_index: int = 0) -> SmgStatus:
    """Conflict test from the perspective of agent `self_index`.

    Occupancy windows are computed at v_max (worst case). The overlap test pads the
    body length by the sum of the two disc radii so that near-miss crossings, where
    the discs would still touch even though the nominal windows are disjoint, are
    treated as conflicts. Detection is therefore conservative; the reported
    enter/exit times use the unpadded body length.
    """
    i, j = self_index, 1 - self_index
    state_i, params_i = world.agents[i]
    state_j, params_j = world.agents[j]
    q = ray_intersection(state_i, state_j)
    if q is None:
        return SmgStatus(None, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, False)
    d_i = state_i.position.dist(q)
    d_j = state_j.position.dist(q)
    enter_i, exit_i = occupancy_interval(d_i, params_i.v_max, params_i.body_length)
    enter_j, exit_j = occupancy_interval(d_j, params_j.v_max, params_j.body_length)
    pad_i = (params_i.radius + params_j.radius) / params_i.v_max
    pad_j = (params_i.radius + params_j.radius) / params_j.v_max
    # Closed-interval overlap: boundary contact counts.
    active = enter_i <= exit_j + pad_j and enter_j <= exit_i + pad_i
    return SmgStatus(q, d_i, d_j, enter_i, exit_i, enter_j, exit_j, active)
