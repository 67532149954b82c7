"""Leader/follower role assignment and nominal go-to-goal control.

Roles come from either a time-to-conflict-point comparison (the fallback strategy)
or a priority consensus reached through dialogue, which overrides the fallback.
The follower's speed cap is chosen so it reaches the conflict point exactly when
the leader has cleared it.
"""
from __future__ import annotations

import math
from enum import Enum
from typing import Optional

from .negotiation import Consensus
from .smg import SmgStatus
from .world import AgentParams, AgentState, ControlInput, PriorityType, wrap_angle

HEADING_GAIN = 2.0  # s^-1, proportional heading controller

PRIORITY_RANK = {
    PriorityType.HOSPITAL: 3,
    PriorityType.AIRPORT: 2,
    PriorityType.GROCERY: 1,
}


class Role(Enum):
    LEADER = "leader"
    FOLLOWER = "follower"
    UNASSIGNED = "unassigned"


def follower_speed_cap(d_follower: float, d_leader: float, l: float, v_max: float) -> float:
    """Speed that puts the follower at the conflict point as the leader clears it."""
    if d_leader < 0.0 or l <= 0.0 or v_max <= 0.0:
        raise ValueError("invalid cap arguments")
    return min(v_max, d_follower * v_max / (l + d_leader))


def assign_roles_strategy1(smg: SmgStatus, self_id: int, other_id: int) -> Role:
    """Leader iff own time-to-conflict-point is smaller; ties go to the lower id."""
    if smg.enter_self < smg.enter_other:
        return Role.LEADER
    if smg.enter_self > smg.enter_other:
        return Role.FOLLOWER
    return Role.LEADER if self_id < other_id else Role.FOLLOWER


def assign_roles_consensus(consensus: Consensus, self_id: int,
                           self_rank: int, other_rank: int) -> Role:
    """Higher-rank agent leads. Without a usable consensus: Unassigned (fallback stands)."""
    if not consensus.reached or consensus.higher_priority_agent is None:
        return Role.UNASSIGNED
    agreed_leader = consensus.higher_priority_agent
    if agreed_leader == self_id:
        # Sanity: a consensus naming us leader with a lower rank is inconsistent.
        if self_rank < other_rank:
            return Role.UNASSIGNED
        return Role.LEADER
    if other_rank < self_rank:
        return Role.UNASSIGNED
    return Role.FOLLOWER


def heading_command(state: AgentState, params: AgentParams) -> float:
    """Proportional steering toward the goal, clamped to the angular rate limit."""
    to_goal = params.goal - state.position
    bearing = math.atan2(to_goal.y, to_goal.x)
    w = HEADING_GAIN * wrap_angle(bearing - state.heading)
    return min(max(w, -params.omega_max), params.omega_max)


def nominal_control(state: AgentState, params: AgentParams, role: Role,
                    smg: Optional[SmgStatus], v_cap: float) -> ControlInput:
    """Leader and unassigned agents drive at v_max; the follower honors v_cap."""
    w = heading_command(state, params)
    if role is Role.FOLLOWER and smg is not None and smg.q_point is not None:
        return ControlInput(v_cap, w)
    return ControlInput(params.v_max, w)
