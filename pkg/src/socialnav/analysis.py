"""Post-hoc game-theoretic checks on a finished run: welfare optimality of the
realized role ordering and a best-response deviation search."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .metrics import social_welfare
from .runner import SimResult, _make_params
from .strategy import PRIORITY_RANK, heading_command
from .world import AgentState, ControlInput, step_dynamics

DEVIATION_MULTIPLIERS = (0.0, 0.25, 0.5, 0.75, 1.0)
DEVIATION_WINDOW_LENGTHS = (1, 2, 5, 10)


def welfare_comparison(result: SimResult,
                       rank_map: Optional[dict] = None) -> tuple[float, float]:
    """Welfare of the realized time-to-goal assignment vs. the same pair of times
    swapped between the agents. The realized ordering should never lose."""
    if any(t is None for t in result.ttg):
        raise ValueError("both agents must reach their goals")
    ranks = tuple((rank_map or PRIORITY_RANK)[p] for p in result.spec.priority_pair)
    realized = social_welfare(ranks, result.ttg)
    swapped = social_welfare(ranks, (result.ttg[1], result.ttg[0]))
    return realized, swapped


@dataclass(frozen=True)
class Deviation:
    agent_id: int
    start_k: int
    length: int
    multiplier: float
    ttg: float


def _replay_with_deviation(result: SimResult, agent_id: int, start_k: int,
                           length: int, multiplier: float) -> Optional[float]:
    """Re-run one agent with its linear speed forced to multiplier * v_max over
    ticks [start_k, start_k + length), no safety filter, against the other
    agent's recorded trajectory. Returns the deviator's time-to-goal, or None if
    it collides (with the other agent or a wall) or never arrives."""
    spec = result.spec
    dt = spec.dt
    params = _make_params(spec, agent_id)
    own = result.agents[agent_id]
    other = result.agents[1 - agent_id]
    other_params = _make_params(spec, 1 - agent_id)
    # The un-deviated prefix reproduces the recorded trajectory, so start there.
    state = AgentState(own.positions[start_k], own.headings[start_k])
    n_log = len(own.v)
    horizon = max(2 * n_log, int(round(40.0 / dt)))
    for k in range(start_k, horizon):
        t = k * dt
        other_pos = other.positions[min(k, len(other.positions) - 1)]
        if state.position.dist(other_pos) < params.radius + other_params.radius:
            return None
        for obs in spec.obstacles:
            if state.position.dist(obs.center) < params.radius + obs.radius:
                return None
        if state.position.dist(params.goal) <= params.goal_tolerance:
            return t
        if k < start_k + length:
            v = multiplier * params.v_max
        elif k < n_log:
            v = own.v[k]
        else:
            v = params.v_max
        u = ControlInput(v, heading_command(state, params))
        state = step_dynamics(state, u, dt)
    return None


def find_improving_deviation(result: SimResult, agent_id: int,
                             from_k: int = 0) -> Optional[Deviation]:
    """Scan speed-profile deviations (window start, length, multiplier) from the
    given tick onward; return the first collision-free deviation that strictly
    improves the deviator's time-to-goal, or None."""
    eq_ttg = result.ttg[agent_id]
    if eq_ttg is None:
        raise ValueError("equilibrium run did not reach the goal")
    log = result.agents[agent_id]
    n = len(log.v)
    for start_k in range(from_k, n):
        if log.at_goal[start_k]:
            break  # deviating after arrival cannot help
        for length in DEVIATION_WINDOW_LENGTHS:
            for m in DEVIATION_MULTIPLIERS:
                ttg = _replay_with_deviation(result, agent_id, start_k, length, m)
                if ttg is not None and ttg < eq_ttg - 1e-9:
                    return Deviation(agent_id, start_k, length, m, ttg)
    return None
