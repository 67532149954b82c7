"""Tick-loop executor: observe -> dialogue -> conflict detection -> roles ->
nominal control -> safety filter -> integrate, plus per-run logging and the
suite driver."""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from . import metrics, negotiation, scenarios, smg as smg_mod, strategy
from .metrics import RunRecord
from .safety import (SafetyConfig, apply_safety, build_agent_constraints,
                     hardcoded_baseline, mpc_cbf_baseline, smg_cbf_baseline)
from .scenarios import Asymmetry, ScenarioKind, ScenarioSpec
from .strategy import PRIORITY_RANK, Role
from .world import (AgentParams, AgentState, ControlInput, STOP, Vec2, WorldState,
                    clamp_input, goal_reached, step_dynamics)

CSV_COLUMNS = ["run_id", "t", "agent_id", "x", "y", "theta", "v", "omega",
               "role", "smg_active", "min_h", "dialogue_active"]

PRE_SMG_SUPPRESSION_S = 5.0
# The hardcoded and fixed-ratio baselines legitimately take longer than the
# 15 s scenario budget; they get headroom so their makespans stay measurable.
EXTENDED_T_MAX = 25.0


class Method(Enum):
    MPC_CBF = "mpc-cbf"
    SMG_CBF = "smg-cbf"
    NO_LLM = "no-llm"
    GROUND_TRUTH = "ground-truth"
    PRE_SMG = "pre-smg"
    SMG_COMM = "smg-comm"
    HARDCODED = "hardcoded"


GAMECHAT_METHODS = (Method.NO_LLM, Method.GROUND_TRUTH, Method.PRE_SMG, Method.SMG_COMM)
CONSENSUS_METHODS = (Method.GROUND_TRUTH, Method.PRE_SMG, Method.SMG_COMM)


class Backend(Enum):
    RULE = "rule"
    LLM = "llm"


@dataclass
class RunConfig:
    scenario: ScenarioKind = ScenarioKind.DOORWAY
    variant: object = "all"  # int or "all"
    method: Method = Method.NO_LLM
    backend: Backend = Backend.RULE
    seed: int = 0
    t_max: Optional[float] = None
    latency: float = negotiation.DEFAULT_LATENCY
    output_dir: Optional[str] = None


@dataclass
class AgentLog:
    positions: list = field(default_factory=list)
    headings: list = field(default_factory=list)
    v: list = field(default_factory=list)
    omega: list = field(default_factory=list)
    roles: list = field(default_factory=list)
    at_goal: list = field(default_factory=list)


@dataclass
class SimResult:
    spec: ScenarioSpec
    method: Method
    times: list
    agents: tuple  # 2 x AgentLog
    smg_active: list
    dialogue_active: list
    min_h_per_tick: list
    min_h: float
    collision_ticks: int
    ttg: tuple  # 2 x Optional[float]
    cross_times: tuple  # 2 x Optional[float], interpolated passage of Q
    clear_times: tuple  # 2 x Optional[float]
    follower_id: Optional[int]
    min_follower_v: Optional[float]
    consensus: negotiation.Consensus
    dialogue: Optional[negotiation.DialogueState]
    t_max: float


def _default_t_max(method: Method, spec: ScenarioSpec) -> float:
    if method in (Method.HARDCODED, Method.SMG_CBF):
        return EXTENDED_T_MAX
    return spec.t_max


def _make_params(spec: ScenarioSpec, i: int) -> AgentParams:
    return AgentParams(
        radius=scenarios.AGENT_RADIUS, body_length=scenarios.BODY_LENGTH,
        v_max=spec.v_max, omega_max=spec.omega_max,
        priority_type=spec.priority_pair[i], task_string=spec.task_strings[i],
        goal=spec.agent_goals[i], goal_tolerance=scenarios.GOAL_TOLERANCE)


def _make_backends(spec: ScenarioSpec, backend: Backend):
    cls = negotiation.RuleBackend if backend is Backend.RULE else negotiation.LlmBackend
    return [cls(i, spec.priority_pair[i], spec.task_strings[i]) for i in (0, 1)]


def _global_min_h(world: WorldState, safety: SafetyConfig) -> float:
    """Min barrier value across the agent pair and every agent-obstacle pair."""
    (s0, p0), (s1, p1) = world.agents
    keep = p0.radius + p1.radius + safety.margin
    best = s0.position.dist(s1.position) ** 2 - keep * keep
    for s, p in world.agents:
        for obs in world.obstacles:
            k = p.radius + obs.radius + safety.margin
            best = min(best, s.position.dist(obs.center) ** 2 - k * k)
    return best


def _interp_crossing(prev_prog, prog, threshold, t_prev, dt) -> Optional[float]:
    if prev_prog < threshold <= prog:
        frac = (threshold - prev_prog) / (prog - prev_prog)
        return t_prev + frac * dt
    return None


def simulate(spec: ScenarioSpec, method: Method, backend: Backend = Backend.RULE,
             latency: float = negotiation.DEFAULT_LATENCY,
             safety: Optional[SafetyConfig] = None,
             t_max: Optional[float] = None,
             forced_leader: Optional[int] = None) -> SimResult:
    """Run one scenario to completion and return the full log.

    `forced_leader` pins the consensus leader regardless of priorities; used for
    counterfactual welfare comparisons.
    """
    safety = safety or SafetyConfig()
    t_max = t_max if t_max is not None else _default_t_max(method, spec)
    dt = spec.dt
    params = [_make_params(spec, i) for i in (0, 1)]
    states = [spec.agent_starts[0], spec.agent_starts[1]]
    world = WorldState(0.0, list(zip(states, params)), list(spec.obstacles), dt)
    ranks = tuple(PRIORITY_RANK[p] for p in spec.priority_pair)

    # Nominal conflict point and per-agent progress coordinates along desired lines.
    q_nominal = smg_mod.ray_intersection(*spec.agent_starts)
    line_units, q_progs = [], []
    for i in (0, 1):
        d = spec.agent_goals[i] - spec.agent_starts[i].position
        u = d.scaled(1.0 / d.norm())
        line_units.append(u)
        q_progs.append((q_nominal - spec.agent_starts[i].position).dot(u)
                       if q_nominal is not None else math.inf)

    # Dialogue setup.
    dialogue: Optional[negotiation.DialogueState] = None
    backends = None
    consensus = negotiation.Consensus()
    consensus_leader: Optional[int] = None
    if method is Method.GROUND_TRUTH:
        winner = 0 if ranks[0] > ranks[1] else 1
        consensus = negotiation.Consensus(True, winner, 0.0, True)
        consensus_leader = winner
    elif method in (Method.PRE_SMG, Method.SMG_COMM):
        backends = _make_backends(spec, backend)
        if method is Method.PRE_SMG:
            dialogue = negotiation.DialogueState(next_event_time=latency)
    if forced_leader is not None:
        consensus = negotiation.Consensus(True, forced_leader, 0.0, None)
        consensus_leader = forced_leader

    logs = (AgentLog(), AgentLog())
    times, smg_active_log, dialogue_active_log, min_h_log = [], [], [], []
    engaged = False
    frozen_roles: Optional[tuple] = None
    yielding = [False, False]
    crossed = [False, False]
    cleared = [False, False]
    cross_times: list = [None, None]
    clear_times: list = [None, None]
    prev_progs = [(states[i].position - spec.agent_starts[i].position).dot(line_units[i])
                  for i in (0, 1)]
    ttg: list = [None, None]
    collision_ticks = 0
    min_h = math.inf
    hardcoded_released = False
    follower_seen: Optional[int] = None

    n_steps = int(round(t_max / dt))
    for k in range(n_steps + 1):
        t = k * dt
        world.time = t
        at_goal = [goal_reached(states[i], params[i]) for i in (0, 1)]
        for i in (0, 1):
            if at_goal[i] and ttg[i] is None:
                ttg[i] = t
        if all(at_goal) or k == n_steps:
            # Log the terminal sample and stop.
            times.append(t)
            h_now = _global_min_h(world, safety)
            min_h = min(min_h, h_now)
            min_h_log.append(h_now)
            smg_active_log.append(False)
            dialogue_active_log.append(bool(dialogue and dialogue.active))
            for i in (0, 1):
                logs[i].positions.append(states[i].position)
                logs[i].headings.append(states[i].heading)
                logs[i].v.append(0.0)
                logs[i].omega.append(0.0)
                logs[i].roles.append("none")
                logs[i].at_goal.append(at_goal[i])
            break

        # Dialogue events advance on sim time.
        if dialogue is not None and dialogue.active:
            negotiation.advance_dialogue(dialogue, t, backends, latency, ranks)
            if dialogue.consensus.reached:
                consensus = dialogue.consensus
                if forced_leader is None:
                    consensus_leader = consensus.higher_priority_agent

        # Conflict detection (from agent 0's perspective; symmetric by construction).
        status0 = smg_mod.detect_smg(world, 0)
        suppressed = (method is Method.PRE_SMG and consensus_leader is None
                      and t < PRE_SMG_SUPPRESSION_S)
        if status0.active and not suppressed:
            if not engaged and method is Method.SMG_COMM and dialogue is None:
                dialogue = negotiation.DialogueState(next_event_time=t + latency)
            engaged = True
        conflict = engaged and status0.q_point is not None

        # Role resolution.
        roles: tuple = (Role.UNASSIGNED, Role.UNASSIGNED)
        if method in GAMECHAT_METHODS and conflict:
            if consensus_leader is not None:
                roles = tuple(Role.LEADER if i == consensus_leader else Role.FOLLOWER
                              for i in (0, 1))
            elif frozen_roles is not None:
                roles = frozen_roles
            else:
                r0 = strategy.assign_roles_strategy1(status0, 0, 1)
                roles = (r0, Role.FOLLOWER if r0 is Role.LEADER else Role.LEADER)
        elif method is Method.SMG_CBF and conflict:
            r0 = strategy.assign_roles_strategy1(status0, 0, 1)
            roles = (r0, Role.FOLLOWER if r0 is Role.LEADER else Role.LEADER)
        if Role.FOLLOWER in roles:
            follower_seen = roles.index(Role.FOLLOWER)

        # Controls. When roles are active the leader's input is resolved first
        # so the follower's pair constraint can use it exactly for this step.
        inputs: list = [None, None]
        order = (0, 1)
        if Role.LEADER in roles and method in GAMECHAT_METHODS:
            lead = roles.index(Role.LEADER)
            order = (lead, 1 - lead)
        for i in order:
            if at_goal[i]:
                inputs[i] = STOP
                continue
            if method is Method.MPC_CBF:
                u = mpc_cbf_baseline(world, i, safety)
            elif method is Method.SMG_CBF:
                u = smg_cbf_baseline(world, i, safety)
            elif method is Method.HARDCODED:
                u = hardcoded_baseline(world, i, safety, q_nominal, hardcoded_released)
            else:
                status_i = status0 if i == 0 else status0.swapped()
                v_cap = params[i].v_max
                if roles[i] is Role.FOLLOWER and conflict and not crossed[i]:
                    q = status0.q_point
                    d_f = states[i].position.dist(q)
                    d_l = states[1 - i].position.dist(q)
                    body = params[i].body_length
                    # A leader assigned well behind the follower cannot be
                    # trailed by the exact-contact schedule (their paths would
                    # cross inside the keepout radius), so the follower waits,
                    # and keeps waiting until the leader is a body length ahead.
                    if d_l - d_f >= 0.5 * body:
                        yielding[i] = True
                    if yielding[i]:
                        if d_f >= d_l + body:
                            yielding[i] = False
                        else:
                            v_cap = 0.0
                    if not yielding[i]:
                        v_cap = strategy.follower_speed_cap(
                            d_f, d_l, body, params[i].v_max)
                    if frozen_roles is None and consensus_leader is None \
                            and v_cap < params[i].v_max:
                        frozen_roles = roles
                u = strategy.nominal_control(states[i], params[i], roles[i],
                                             status_i, v_cap)
                other_cmd = inputs[1 - i] if roles[i] is Role.FOLLOWER else None
                u = apply_safety(world, i, u, safety, v_cap,
                                 other_command=other_cmd)
            inputs[i] = clamp_input(u, params[i])

        # Bookkeeping before integration.
        h_now = _global_min_h(world, safety)
        min_h = min(min_h, h_now)
        if metrics.detect_collision(world):
            collision_ticks += 1
        times.append(t)
        smg_active_log.append(status0.active and not suppressed)
        dialogue_active_log.append(bool(dialogue and dialogue.active))
        for i in (0, 1):
            logs[i].positions.append(states[i].position)
            logs[i].headings.append(states[i].heading)
            logs[i].v.append(inputs[i].linear_velocity)
            logs[i].omega.append(inputs[i].angular_velocity)
            logs[i].roles.append(roles[i].value if roles[i] is not Role.UNASSIGNED
                                 else "none")
            logs[i].at_goal.append(at_goal[i])
        min_h_log.append(h_now)

        # Integrate.
        for i in (0, 1):
            if not at_goal[i]:
                states[i] = step_dynamics(states[i], inputs[i], dt)
        world.agents = list(zip(states, params))
        world.last_inputs = list(inputs)

        # Conflict-point passage tracking (interpolated along the desired line).
        for i in (0, 1):
            prog = (states[i].position - spec.agent_starts[i].position).dot(line_units[i])
            if not crossed[i]:
                tc = _interp_crossing(prev_progs[i], prog, q_progs[i], t, dt)
                if tc is not None:
                    crossed[i] = True
                    cross_times[i] = tc
            if not cleared[i]:
                tc = _interp_crossing(prev_progs[i], prog,
                                      q_progs[i] + params[i].body_length, t, dt)
                if tc is not None:
                    cleared[i] = True
                    clear_times[i] = tc
            prev_progs[i] = prog
        if method is Method.HARDCODED and cleared[0]:
            hardcoded_released = True

    # Follower minimum speed prior to reaching the conflict point. Without roles,
    # fall back to the slower agent (the one that crosses second).
    slow_id = follower_seen
    if slow_id is None and all(c is not None for c in cross_times):
        slow_id = 0 if cross_times[0] > cross_times[1] else 1
    min_follower_v = None
    if slow_id is not None:
        vs = [v for tt, v, done in zip(times, logs[slow_id].v, logs[slow_id].at_goal)
              if not done and (cross_times[slow_id] is None or tt < cross_times[slow_id])]
        if vs:
            min_follower_v = min(vs)

    return SimResult(
        spec=spec, method=method, times=times, agents=logs,
        smg_active=smg_active_log, dialogue_active=dialogue_active_log,
        min_h_per_tick=min_h_log, min_h=min_h, collision_ticks=collision_ticks,
        ttg=tuple(ttg), cross_times=tuple(cross_times), clear_times=tuple(clear_times),
        follower_id=slow_id, min_follower_v=min_follower_v,
        consensus=consensus, dialogue=dialogue, t_max=t_max)


def result_to_record(result: SimResult, scenario_id: str) -> RunRecord:
    spec = result.spec
    ranks = tuple(PRIORITY_RANK[p] for p in spec.priority_pair)
    dt = spec.dt
    deadlocked = metrics.detect_deadlock(
        result.times, [result.agents[i].v for i in (0, 1)],
        [result.agents[i].at_goal for i in (0, 1)], result.t_max, dt)
    deadlocks = sum(1 for t in result.ttg if t is None) if deadlocked else 0
    correct_priority = None
    if all(c is not None for c in result.cross_times):
        first = 0 if result.cross_times[0] < result.cross_times[1] else 1
        hi = 0 if ranks[0] > ranks[1] else 1
        correct_priority = first == hi
    makespan = None
    welfare = None
    if all(t is not None for t in result.ttg):
        makespan = max(result.ttg)
        welfare = metrics.social_welfare(ranks, result.ttg)
    dev = sum(
        metrics.path_deviation(result.agents[i].positions,
                               spec.agent_starts[i].position, spec.agent_goals[i])
        for i in (0, 1)) / 2.0
    c = result.consensus
    return RunRecord(
        scenario_id=scenario_id, method=result.method.value,
        collisions=1 if result.collision_ticks > 0 else 0,
        deadlocks=deadlocks, correct_priority=correct_priority,
        ttg=result.ttg, makespan=makespan,
        min_follower_v=result.min_follower_v, path_dev_avg=dev,
        welfare=welfare, min_h=result.min_h,
        consensus_time=c.reached_at if c.reached else None,
        consensus_correct=c.correct)


def hi_pri_ttg(result: SimResult) -> Optional[float]:
    ranks = tuple(PRIORITY_RANK[p] for p in result.spec.priority_pair)
    return result.ttg[0 if ranks[0] > ranks[1] else 1]


def trajectory_rows(result: SimResult, run_id: str) -> list[list]:
    rows = []
    for k, t in enumerate(result.times):
        for i in (0, 1):
            log = result.agents[i]
            rows.append([
                run_id, f"{t:.1f}", i,
                f"{log.positions[k].x:.6f}", f"{log.positions[k].y:.6f}",
                f"{log.headings[k]:.6f}", f"{log.v[k]:.6f}", f"{log.omega[k]:.6f}",
                log.roles[k], int(result.smg_active[k]),
                f"{result.min_h_per_tick[k]:.6f}", int(result.dialogue_active[k]),
            ])
    return rows


def write_trajectory_csv(path: str, result: SimResult, run_id: str) -> None:
    with open(path, "w") as f:
        f.write(",".join(CSV_COLUMNS) + "\n")
        for row in trajectory_rows(result, run_id):
            f.write(",".join(str(c) for c in row) + "\n")


def run_one(config: RunConfig, variant_index: int) -> tuple[RunRecord, SimResult]:
    """Execute one scenario variant; write trajectory/dialogue/record files if
    an output directory is configured."""
    spec = scenarios.variant_by_index(config.scenario, variant_index, config.seed)
    result = simulate(spec, config.method, config.backend, config.latency,
                      t_max=config.t_max)
    run_id = f"{spec.name}_v{variant_index}_{config.method.value}"
    record = result_to_record(result, run_id)
    if config.output_dir:
        run_dir = os.path.join(config.output_dir, run_id)
        os.makedirs(run_dir, exist_ok=True)
        write_trajectory_csv(os.path.join(run_dir, "trajectory.csv"), result, run_id)
        scenarios.write_spec(os.path.join(run_dir, "scenario.json"), spec)
        if result.dialogue is not None:
            negotiation.write_transcript(os.path.join(run_dir, "dialogue.jsonl"),
                                         result.dialogue)
        with open(os.path.join(run_dir, "record.json"), "w") as f:
            json.dump(record.to_dict(), f, indent=2)
    return record, result


def run_suite(config: RunConfig) -> metrics.MethodSummary:
    """All 18 variants of one scenario kind for one method."""
    records, hp = [], []
    for idx in range(18):
        record, result = run_one(config, idx)
        records.append(record)
        hp.append(hi_pri_ttg(result))
    summary = metrics.aggregate_suite(records, hp)
    if config.output_dir:
        os.makedirs(config.output_dir, exist_ok=True)
        path = os.path.join(config.output_dir,
                            f"summary_{config.scenario.value}_{config.method.value}")
        with open(path + ".jsonl", "w") as f:
            for r in records:
                f.write(json.dumps(r.to_dict()) + "\n")
            f.write(json.dumps(metrics.summary_to_dict(config.scenario.value, summary))
                    + "\n")
        with open(path + ".txt", "w") as f:
            f.write(metrics.format_table(
                f"{config.scenario.value} / {config.method.value}", [summary]) + "\n")
    return summary
