"""Safety layer: per-step control barrier constraints and the minimally invasive
speed filter, plus the three baseline controllers.

Each barrier is h = |p - p_o|^2 - (r + r_o + margin)^2 with the linear-in-v
condition  c*v + bound >= 0,  c = 2 (p - p_o) . e_heading.  Static obstacles
use bound = alpha*h.  The agent-agent barrier is shared: each agent enforces
half the gain (the other agent enforces the other half), and the other's motion
is credited only while it recedes, so a follower may trail the leader at the
safety boundary instead of being braked against a phantom static disc, while
the mutual-approach case stays certified no matter what the other agent does.
With alpha*dt <= 1 the discrete step keeps h nonnegative. The filter only ever
reduces linear speed; heading is untouched.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .smg import detect_smg
from .strategy import Role, assign_roles_strategy1, heading_command
from .world import (AgentParams, AgentState, ControlInput, Obstacle, Vec2,
                    WorldState, clamp_input)

# Constraint-construction radius: neighbors farther than this cannot bind within
# a step, so their constraints are skipped.
NEARBY_RADIUS = 1.5


@dataclass(frozen=True)
class CbfConstraint:
    coeff_v: float  # c: gradient of h along the heading direction
    bound: float    # alpha*h plus the neighbor-motion term
    h_value: float


@dataclass(frozen=True)
class SafetyConfig:
    alpha: float = 5.0
    margin: float = 0.002
    zeta: float = 2.5

    def __post_init__(self):
        if self.alpha <= 0 or self.margin < 0 or self.zeta <= 1:
            raise ValueError(f"invalid safety config: {self}")


def build_cbf(self_state: AgentState, self_radius: float, other_center: Vec2,
              other_radius: float, alpha: float, margin: float = 0.0,
              other_velocity: Optional[Vec2] = None,
              exact_other: bool = False) -> CbfConstraint:
    """Barrier constraint against a circular neighbor (static unless a velocity is given)."""
    rel = self_state.position - other_center
    keepout = self_radius + other_radius + margin
    h = rel.dot(rel) - keepout * keepout
    c = 2.0 * rel.dot(self_state.heading_vec())
    if other_velocity is None:
        bound = alpha * h
    elif exact_other:
        # The neighbor's commanded velocity for this very step is known (the
        # leader is resolved before the follower), so the full gain applies
        # with a signed credit for the neighbor's motion.
        bound = alpha * h - 2.0 * rel.dot(other_velocity)
    else:
        # Shared barrier: half the gain here, the neighbor enforces the other
        # half. Receding motion (-2 rel . v_other > 0) is credited; approaching
        # motion is the neighbor's responsibility and is not double-counted.
        bound = 0.5 * alpha * h + max(0.0, -2.0 * rel.dot(other_velocity))
    return CbfConstraint(c, bound, h)


def filter_control(u_nominal: ControlInput, constraints: list[CbfConstraint],
                   v_cap: float) -> ControlInput:
    """Largest v in [0, min(v_nominal, v_cap)] satisfying every constraint; omega unchanged.

    A constraint already violated (h < 0) is a safety fault: the agent stops.
    """
    v = min(u_nominal.linear_velocity, v_cap)
    for con in constraints:
        if con.h_value < 0.0:
            return ControlInput(0.0, u_nominal.angular_velocity)
        if con.coeff_v < 0.0:
            # Tiny back-off keeps the post-step barrier strictly nonnegative
            # instead of exactly zero up to float rounding.
            v = min(v, con.bound / -con.coeff_v - 1e-9)
    return ControlInput(max(v, 0.0), u_nominal.angular_velocity)


def build_agent_constraints(world: WorldState, agent_id: int,
                            config: SafetyConfig,
                            other_command: Optional[ControlInput] = None) -> list[CbfConstraint]:
    """All barrier constraints for one agent: the other agent (moving) plus nearby obstacles.

    If ``other_command`` is given it is the neighbor's already-resolved input
    for this step and enters the pair constraint exactly; otherwise the
    neighbor's last applied input is used under the shared-responsibility rule.
    """
    state, params = world.agents[agent_id]
    other_id = 1 - agent_id
    other_state, other_params = world.agents[other_id]
    other_u = world.last_inputs[other_id] if other_command is None else other_command
    other_vel = other_state.heading_vec().scaled(other_u.linear_velocity)
    constraints = [build_cbf(state, params.radius, other_state.position,
                             other_params.radius, config.alpha, config.margin,
                             other_velocity=other_vel,
                             exact_other=other_command is not None)]
    for obs in world.obstacles:
        if state.position.dist(obs.center) <= NEARBY_RADIUS:
            constraints.append(build_cbf(state, params.radius, obs.center, obs.radius,
                                         config.alpha, config.margin))
    return constraints


def _goal_seek(world: WorldState, agent_id: int) -> ControlInput:
    state, params = world.agents[agent_id]
    return ControlInput(params.v_max, heading_command(state, params))


def apply_safety(world: WorldState, agent_id: int, u: ControlInput,
                 config: SafetyConfig, v_cap: Optional[float] = None,
                 other_command: Optional[ControlInput] = None) -> ControlInput:
    state, params = world.agents[agent_id]
    u = clamp_input(u, params, v_cap)
    return filter_control(u, build_agent_constraints(world, agent_id, config,
                                                     other_command=other_command),
                          params.v_max if v_cap is None else v_cap)


def mpc_cbf_baseline(world: WorldState, agent_id: int,
                     config: SafetyConfig) -> ControlInput:
    """Go-to-goal at v_max with barrier filtering only; no conflict handling."""
    return apply_safety(world, agent_id, _goal_seek(world, agent_id), config)


def smg_cbf_baseline(world: WorldState, agent_id: int,
                     config: SafetyConfig) -> ControlInput:
    """Like the role strategy but with a fixed follower cap v_max / zeta, held for
    as long as the forward rays still cross ahead of both agents."""
    state, params = world.agents[agent_id]
    smg = detect_smg(world, agent_id)
    u = _goal_seek(world, agent_id)
    v_cap = params.v_max
    if smg.q_point is not None:
        role = assign_roles_strategy1(smg, agent_id, 1 - agent_id)
        if role is Role.FOLLOWER:
            v_cap = params.v_max / config.zeta
            u = ControlInput(v_cap, u.angular_velocity)
    return apply_safety(world, agent_id, u, config, v_cap)


def hardcoded_baseline(world: WorldState, agent_id: int, config: SafetyConfig,
                       q_point: Vec2, released: bool) -> ControlInput:
    """Agent 0 drives; agent 1 stays parked until agent 0 has cleared the conflict point."""
    if agent_id == 1 and not released:
        return ControlInput(0.0, 0.0)
    return apply_safety(world, agent_id, _goal_seek(world, agent_id), config)
