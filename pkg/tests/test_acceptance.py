"""Acceptance gate: one test and one printed PASS/FAIL line per release criterion.

All criteria except the live-LLM smoke test run fully offline.
"""
import math
import os
import statistics
import time

import pytest

from socialnav import metrics, scenarios
from socialnav.analysis import find_improving_deviation, welfare_comparison
from socialnav.metrics import path_deviation
from socialnav.runner import (GAMECHAT_METHODS, Backend, Method, RunConfig,
                              result_to_record, run_one, simulate)
from socialnav.scenarios import ScenarioKind
from socialnav.world import PriorityType

SYMMETRIC_VARIANTS = (0, 3, 6, 9, 12, 15)
DT = scenarios.DT


def check(name, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def sweep():
    """Every method on every scenario variant, simulated once."""
    t0 = time.perf_counter()
    results = {}
    for kind in ScenarioKind:
        for i in range(18):
            spec = scenarios.variant_by_index(kind, i)
            for m in Method:
                results[(kind, i, m)] = simulate(spec, m)
    return results, time.perf_counter() - t0


def deadlocked(r):
    return metrics.detect_deadlock(r.times, [a.v for a in r.agents],
                                   [a.at_goal for a in r.agents], r.t_max, DT)


def mean_makespan(results, kind, method):
    vals = [max(results[(kind, i, method)].ttg) for i in range(18)
            if not deadlocked(results[(kind, i, method)])
            and all(t is not None for t in results[(kind, i, method)].ttg)]
    return statistics.mean(vals)


def test_safety_no_collisions_min_h_runtime(sweep):
    results, runtime = sweep
    collisions = sum(r.collision_ticks for r in results.values())
    min_h = min(r.min_h for r in results.values())
    ok = collisions == 0 and min_h >= 0.0 and runtime < 120.0
    check("safety: zero collisions, min h >= 0, suite under 2 min", ok,
          f"collisions={collisions}, min_h={min_h:.2e}, runtime={runtime:.1f}s")


def test_deadlock_reproduction(sweep):
    results, _ = sweep
    dl = {k for k, r in results.items() if deadlocked(r)}
    baseline_doorway = all((ScenarioKind.DOORWAY, i, Method.MPC_CBF) in dl
                           for i in SYMMETRIC_VARIANTS)
    gamechat_dl = [k for k in dl if k[2] in GAMECHAT_METHODS]
    ok = baseline_doorway and not gamechat_dl
    check("deadlocks: baseline stalls every symmetric doorway, coordinated methods never",
          ok, f"baseline symmetric doorway deadlocks={baseline_doorway}, "
              f"coordinated deadlocks={gamechat_dl}")


def test_makespans(sweep):
    results, _ = sweep
    d = ScenarioKind.DOORWAY
    x = ScenarioKind.INTERSECTION
    m_nollm = mean_makespan(results, d, Method.NO_LLM)
    m_presmg = mean_makespan(results, d, Method.PRE_SMG)
    m_hard = mean_makespan(results, d, Method.HARDCODED)
    m_smgcbf_d = mean_makespan(results, d, Method.SMG_CBF)
    m_smgcbf_x = mean_makespan(results, x, Method.SMG_CBF)
    m_nollm_x = mean_makespan(results, x, Method.NO_LLM)
    ok = (abs(m_nollm - 11.27) <= 1.0 and abs(m_presmg - 11.53) <= 1.0
          and abs(m_hard - 18.4) <= 1.0
          and m_smgcbf_d >= m_nollm and m_smgcbf_x >= m_nollm_x
          and abs(m_smgcbf_x - 15.0) <= 1.5)
    check("makespans: doorway targets hit, conservative cap variant slower", ok,
          f"doorway no-llm={m_nollm:.2f} (11.27±1.0), pre-smg={m_presmg:.2f} "
          f"(11.53±1.0), hardcoded={m_hard:.2f} (18.4±1.0), "
          f"capped-cbf doorway={m_smgcbf_d:.2f}, intersection={m_smgcbf_x:.2f} (15.0±1.5)")


def test_priority_ordering(sweep):
    results, _ = sweep
    pct = {}
    for m in Method:
        vals = []
        for kind in ScenarioKind:
            for i in range(18):
                r = results[(kind, i, m)]
                rec = result_to_record(r, f"{kind.value}-{i}")
                if rec.deadlocks == 0 and rec.correct_priority is not None:
                    vals.append(rec.correct_priority)
        pct[m] = 100.0 * sum(vals) / len(vals) if vals else None
    consensus_ok = all(pct[m] == 100.0 for m in
                       (Method.GROUND_TRUTH, Method.PRE_SMG, Method.SMG_COMM))
    chance_ok = all(40.0 <= pct[m] <= 60.0 for m in
                    (Method.MPC_CBF, Method.SMG_CBF, Method.NO_LLM, Method.HARDCODED))
    check("priority: consensus methods 100% correct, noncommunicative near chance",
          consensus_ok and chance_ok,
          ", ".join(f"{m.value}={pct[m]:.0f}%" for m in Method))


def test_minimal_invasiveness(sweep):
    results, _ = sweep
    max_heading_dev = 0.0
    max_path_dev = 0.0
    for kind in ScenarioKind:
        for i in range(18):
            for m in GAMECHAT_METHODS:
                r = results[(kind, i, m)]
                fid = r.follower_id
                if fid is None:
                    continue
                lid = 1 - fid
                start = r.spec.agent_starts[lid]
                dev = max(abs(h - start.heading) for h in r.agents[lid].headings)
                max_heading_dev = max(max_heading_dev, dev)
                pd = path_deviation(r.agents[fid].positions,
                                    r.spec.agent_starts[fid].position,
                                    r.spec.agent_goals[fid])
                max_path_dev = max(max_path_dev, pd)
    # Cap-formula value at the symmetric doorway engagement geometry, checked on
    # the methods whose roles hold from first detection.
    cap_ref = 2.0 * 0.3 / (0.2 + 2.0)
    vs = [results[(ScenarioKind.DOORWAY, i, m)].min_follower_v
          for i in SYMMETRIC_VARIANTS for m in (Method.NO_LLM, Method.GROUND_TRUTH)]
    min_v_ok = all(abs(v - cap_ref) <= 0.06 for v in vs)
    ok = max_heading_dev <= 1e-9 and max_path_dev <= 0.02 and min_v_ok
    check("minimal invasiveness: leader heading untouched, follower on its line, "
          "min speed at the cap value", ok,
          f"max leader heading dev={max_heading_dev:.2e} rad, "
          f"max follower path dev={max_path_dev:.4f} m (<=0.02), "
          f"min follower v in [{min(vs):.4f},{max(vs):.4f}] (target {cap_ref:.4f}±0.06)")


def test_arrival_gap(sweep):
    results, _ = sweep
    gaps = []
    for kind in ScenarioKind:
        for i in range(18):
            for m in GAMECHAT_METHODS:
                r = results[(kind, i, m)]
                fid = r.follower_id
                assert fid is not None, (kind, i, m)
                gap = r.cross_times[fid] - r.clear_times[1 - fid]
                gaps.append(gap)
    lo, hi = min(gaps), max(gaps)
    ok = lo >= 0.0 and hi <= 2 * DT + 1e-9
    check("arrival gap: follower crosses within two ticks of the leader clearing",
          ok, f"range [{lo:.3f}, {hi:.3f}] s over {len(gaps)} runs (limit [0, {2*DT}])")


def test_welfare_argmax(sweep):
    results, _ = sweep
    remap = {PriorityType.HOSPITAL: 100, PriorityType.AIRPORT: 10,
             PriorityType.GROCERY: 1}
    violations = []
    for kind in ScenarioKind:
        for i in range(18):
            r = results[(kind, i, Method.GROUND_TRUTH)]
            for rank_map, label in ((None, "default"), (remap, "remapped")):
                realized, swapped = welfare_comparison(r, rank_map)
                if realized < swapped - 1e-9:
                    violations.append((kind.value, i, label))
    check("welfare: realized role order maximizes priority-weighted welfare, "
          "invariant under rank remap", not violations, f"violations={violations}")


def test_best_response(sweep):
    results, _ = sweep
    found = []
    for kind in ScenarioKind:
        r = results[(kind, 0, Method.GROUND_TRUTH)]
        for agent in (0, 1):
            for k in (0, 10, 20, 30):
                dev = find_improving_deviation(r, agent, k)
                if dev is not None:
                    found.append((kind.value, agent, k, dev))
    check("equilibrium: deviation search finds no improving unilateral deviation",
          not found, f"improving deviations={found or 'none'}")


def test_dialogue_timing_gap(sweep):
    results, _ = sweep
    details = []
    ok = True
    for kind in ScenarioKind:
        m_comm = mean_makespan(results, kind, Method.SMG_COMM)
        m_pre = mean_makespan(results, kind, Method.PRE_SMG)
        details.append(f"{kind.value}: in-conflict={m_comm:.2f}, "
                       f"pre-negotiated={m_pre:.2f}")
        ok = ok and (m_comm - m_pre) <= 0.4
    check("negotiating inside the conflict costs at most 0.4 s of makespan", ok,
          "; ".join(details))


@pytest.mark.skipif(not (os.environ.get("LLM_BASE_URL") and os.environ.get("LLM_MODEL")),
                    reason="live LLM credentials not configured "
                           "(set LLM_BASE_URL and LLM_MODEL)")
def test_llm_backend_smoke():
    correct = 0
    durations = []
    for i in range(6):
        spec = scenarios.variant_by_index(ScenarioKind.DOORWAY, i)
        r = simulate(spec, Method.PRE_SMG, backend=Backend.LLM)
        assert r.dialogue is not None
        for agent in (0, 1):
            assert r.dialogue.messages_sent(agent) <= 4
        if r.consensus.reached and r.consensus.correct:
            correct += 1
        if r.consensus.reached:
            durations.append(r.consensus.reached_at)
    mean_dur = statistics.mean(durations) if durations else math.inf
    ok = correct >= 5 and 2.0 <= mean_dur <= 4.0
    check("live LLM dialogue: correct consensus in >=5/6 runs, duration in [2,4] s",
          ok, f"correct={correct}/6, mean duration={mean_dur:.2f}s")
