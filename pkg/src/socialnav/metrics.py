"""Run-level metrics: collisions, deadlocks, welfare, priority ordering, aggregation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .world import Vec2, WorldState

DEADLOCK_SPEED_THRESHOLD = 0.01  # m/s
DEADLOCK_WINDOW = 2.0            # s


def detect_collision(world: WorldState) -> bool:
    """Strict disc overlap between the agents or with any obstacle (boundary
    contact is not a collision)."""
    (s0, p0), (s1, p1) = world.agents
    if s0.position.dist(s1.position) < p0.radius + p1.radius:
        return True
    return any(s.position.dist(o.center) < p.radius + o.radius
               for s, p in world.agents for o in world.obstacles)


def detect_deadlock(times: list[float], speeds: list[list[float]],
                    at_goal: list[list[bool]], t_max: float, dt: float) -> bool:
    """Run-level deadlock: no agent makes progress toward its goal.

    True if for a contiguous window at least one agent is short of its goal and
    every short-of-goal agent stays below the speed threshold, or the run ends
    at the time budget in that state. An agent parked at its goal never counts
    as stalled, and one agent deliberately waiting while the other drives is
    not a deadlock."""
    run = 0.0
    stalled_now = False
    for k, t in enumerate(times):
        pending = [i for i in range(len(speeds)) if not at_goal[i][k]]
        stalled_now = bool(pending) and all(
            speeds[i][k] < DEADLOCK_SPEED_THRESHOLD for i in pending)
        if stalled_now:
            run += dt
            if run >= DEADLOCK_WINDOW:
                return True
        else:
            run = 0.0
    if times and times[-1] >= t_max - dt / 2 and stalled_now:
        return True
    return False


def social_welfare(priorities: tuple[int, int], ttg: tuple[float, float]) -> float:
    """Priority-weighted sum of inverse times-to-goal."""
    if any(t <= 0 or not math.isfinite(t) for t in ttg):
        raise ValueError(f"times-to-goal must be finite and positive: {ttg}")
    return priorities[0] / ttg[0] + priorities[1] / ttg[1]


def path_deviation(trajectory: list[Vec2], line_start: Vec2, line_end: Vec2) -> float:
    """Mean perpendicular distance from the sampled positions to the desired line."""
    if not trajectory:
        raise ValueError("empty trajectory")
    d = line_end - line_start
    length = d.norm()
    if length == 0:
        raise ValueError("degenerate desired line")
    u = d.scaled(1.0 / length)
    total = 0.0
    for p in trajectory:
        rel = p - line_start
        total += abs(rel.cross(u))
    return total / len(trajectory)


@dataclass
class RunRecord:
    scenario_id: str
    method: str
    collisions: int
    deadlocks: int  # number of deadlocked agents
    correct_priority: Optional[bool]
    ttg: tuple  # 2 x Optional[float]
    makespan: Optional[float]
    min_follower_v: Optional[float]
    path_dev_avg: float
    welfare: Optional[float]
    min_h: float
    consensus_time: Optional[float] = None
    consensus_correct: Optional[bool] = None
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "scenario_id": self.scenario_id, "method": self.method,
            "collisions": self.collisions, "deadlocks": self.deadlocks,
            "correct_priority": self.correct_priority,
            "ttg": list(self.ttg), "makespan": self.makespan,
            "min_follower_v": self.min_follower_v,
            "path_dev_avg": self.path_dev_avg, "welfare": self.welfare,
            "min_h": self.min_h, "consensus_time": self.consensus_time,
            "consensus_correct": self.consensus_correct,
        }


def _mean_std(values: list[float]) -> tuple[Optional[float], Optional[float]]:
    vals = [v for v in values if v is not None]
    if not vals:
        return None, None
    mean = sum(vals) / len(vals)
    if len(vals) < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
    return mean, math.sqrt(var)


@dataclass
class MethodSummary:
    method: str
    runs: int
    collisions: int
    deadlock_runs: int
    pct_correct_priority: Optional[float]
    hi_pri_ttg: tuple       # (mean, std) or (None, None)
    makespan: tuple
    min_v: tuple
    path_dev: tuple
    consensus_time: tuple = (None, None)
    pct_consensus_correct: Optional[float] = None


def aggregate_suite(records: list[RunRecord], hi_pri_ttgs: list[Optional[float]]) -> MethodSummary:
    """Summarize one method's runs. Deadlocked runs are excluded from the timing and
    priority columns; an all-deadlock suite reports those columns as N/A."""
    if not records:
        raise ValueError("no records to aggregate")
    methods = {r.method for r in records}
    if len(methods) != 1:
        raise ValueError(f"mixed methods in aggregate: {methods}")
    live = [(r, h) for r, h in zip(records, hi_pri_ttgs) if r.deadlocks == 0]
    cp_vals = [r.correct_priority for r, _ in live if r.correct_priority is not None]
    pct_cp = 100.0 * sum(cp_vals) / len(cp_vals) if cp_vals else None
    cc_vals = [r.consensus_correct for r in records if r.consensus_correct is not None]
    pct_cc = 100.0 * sum(cc_vals) / len(cc_vals) if cc_vals else None
    return MethodSummary(
        method=records[0].method,
        runs=len(records),
        collisions=sum(r.collisions for r in records),
        deadlock_runs=sum(1 for r in records if r.deadlocks > 0),
        pct_correct_priority=pct_cp,
        hi_pri_ttg=_mean_std([h for _, h in live]),
        makespan=_mean_std([r.makespan for r, _ in live]),
        min_v=_mean_std([r.min_follower_v for r, _ in live]),
        path_dev=_mean_std([r.path_dev_avg for r, _ in live]),
        consensus_time=_mean_std([r.consensus_time for r in records]),
        pct_consensus_correct=pct_cc,
    )


def _fmt(pair, digits=3) -> str:
    mean, std = pair
    if mean is None:
        return "N/A"
    return f"{mean:.{digits}f} +/- {std:.{digits}f}"


def format_table(title: str, summaries: list[MethodSummary]) -> str:
    """Text table with the standard metric columns."""
    header = (f"{'Method':<16} {'#Coll':>5} {'#DLs':>5} {'%CP':>6} "
              f"{'HiPriTTG(s)':>18} {'Makespan(s)':>18} {'Min v(m/s)':>18} {'dPath(m)':>18}")
    lines = [title, "=" * len(header), header, "-" * len(header)]
    for s in summaries:
        cp = "N/A" if s.pct_correct_priority is None else f"{s.pct_correct_priority:.0f}"
        lines.append(
            f"{s.method:<16} {s.collisions:>5} {s.deadlock_runs:>5} {cp:>6} "
            f"{_fmt(s.hi_pri_ttg):>18} {_fmt(s.makespan):>18} "
            f"{_fmt(s.min_v):>18} {_fmt(s.path_dev):>18}")
    return "\n".join(lines)


def summary_to_dict(scenario_kind: str, s: MethodSummary) -> dict:
    return {
        "scenario": scenario_kind, "method": s.method, "runs": s.runs,
        "collisions": s.collisions, "deadlock_runs": s.deadlock_runs,
        "pct_correct_priority": s.pct_correct_priority,
        "hi_pri_ttg_mean": s.hi_pri_ttg[0], "hi_pri_ttg_std": s.hi_pri_ttg[1],
        "makespan_mean": s.makespan[0], "makespan_std": s.makespan[1],
        "min_v_mean": s.min_v[0], "min_v_std": s.min_v[1],
        "path_dev_mean": s.path_dev[0], "path_dev_std": s.path_dev[1],
        "consensus_time_mean": s.consensus_time[0],
        "pct_consensus_correct": s.pct_consensus_correct,
    }
