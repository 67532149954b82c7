/** Parsing and serialization of socialnav run artifacts.
 *
 * The simulator's external interface is three files per run:
 *   - trajectory.csv  (one row per agent per tick)
 *   - scenario.json   (geometry, priorities, task phrasings)
 *   - summary_*.jsonl (per-run records plus one trailing suite summary)
 * This module round-trips the CSV schema and validates the JSON shapes.
 */
import Papa from "papaparse";

export const CSV_COLUMNS = [
  "run_id", "t", "agent_id", "x", "y", "theta", "v", "omega",
  "role", "smg_active", "min_h", "dialogue_active",
] as const;

export interface TrajectoryRow {
  run_id: string;
  t: number;
  agent_id: number;
  x: number;
  y: number;
  theta: number;
  v: number;
  omega: number;
  role: string;
  smg_active: boolean;
  min_h: number;
  dialogue_active: boolean;
}

const NUMERIC: ReadonlyArray<keyof TrajectoryRow> =
  ["t", "x", "y", "theta", "v", "omega", "min_h"];

export function parseTrajectoryCsv(text: string): TrajectoryRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`CSV parse failed: ${parsed.errors[0].message}`);
  }
  const fields = parsed.meta.fields ?? [];
  if (JSON.stringify(fields) !== JSON.stringify(CSV_COLUMNS)) {
    throw new Error(`unexpected CSV header: ${fields.join(",")}`);
  }
  return parsed.data.map((raw, i) => {
    const row: TrajectoryRow = {
      run_id: raw.run_id,
      t: Number(raw.t),
      agent_id: Number(raw.agent_id),
      x: Number(raw.x),
      y: Number(raw.y),
      theta: Number(raw.theta),
      v: Number(raw.v),
      omega: Number(raw.omega),
      role: raw.role,
      smg_active: raw.smg_active === "1",
      min_h: Number(raw.min_h),
      dialogue_active: raw.dialogue_active === "1",
    };
    for (const key of NUMERIC) {
      if (!Number.isFinite(row[key] as number)) {
        throw new Error(`row ${i}: non-numeric ${key}: ${raw[key]}`);
      }
    }
    if (row.agent_id !== 0 && row.agent_id !== 1) {
      throw new Error(`row ${i}: agent_id must be 0 or 1, got ${raw.agent_id}`);
    }
    return row;
  });
}

/** Inverse of parseTrajectoryCsv: same column order and flag encoding. */
export function serializeTrajectoryCsv(rows: TrajectoryRow[]): string {
  const data = rows.map((r) => ({
    run_id: r.run_id,
    t: r.t,
    agent_id: r.agent_id,
    x: r.x.toFixed(6),
    y: r.y.toFixed(6),
    theta: r.theta.toFixed(6),
    v: r.v.toFixed(6),
    omega: r.omega.toFixed(6),
    role: r.role,
    smg_active: r.smg_active ? "1" : "0",
    min_h: r.min_h.toFixed(6),
    dialogue_active: r.dialogue_active ? "1" : "0",
  }));
  return Papa.unparse(data, { columns: CSV_COLUMNS as unknown as string[] }) + "\r\n";
}

export type PriorityType = "hospital" | "airport" | "grocery";

export interface Scenario {
  kind: string;
  asymmetry: string;
  priority_pair: [PriorityType, PriorityType];
  task_strings: [string, string];
  agent_starts: [number, number, number][]; // x, y, heading
  agent_goals: [number, number][];
  obstacles: [number, number, number][]; // x, y, radius
}

export function parseScenario(text: string): Scenario {
  const data = JSON.parse(text);
  for (const key of ["kind", "priority_pair", "agent_starts", "agent_goals",
                     "obstacles"]) {
    if (!(key in data)) throw new Error(`scenario.json missing "${key}"`);
  }
  if (data.agent_starts.length !== 2 || data.agent_goals.length !== 2) {
    throw new Error("scenario must have exactly two agents");
  }
  return data as Scenario;
}

export interface RunRecord {
  scenario_id: string;
  method: string;
  collisions: number;
  deadlocks: number;
  correct_priority: boolean | null;
  ttg: (number | null)[];
  makespan: number | null;
  min_follower_v: number | null;
  path_dev_avg: number;
  welfare: number | null;
  min_h: number;
  consensus_time: number | null;
  consensus_correct: boolean | null;
}

export interface SuiteSummary {
  scenario: string;
  method: string;
  runs: number;
  collisions: number;
  deadlock_runs: number;
  pct_correct_priority: number | null;
  makespan_mean: number | null;
  makespan_std: number | null;
  min_v_mean: number | null;
  path_dev_mean: number | null;
  [extra: string]: unknown;
}

export interface SummaryFile {
  records: RunRecord[];
  summary: SuiteSummary;
}

/** A summary JSONL holds one record per run and a final suite-summary line. */
export function parseSummaryJsonl(text: string): SummaryFile {
  const lines = text.trim().split("\n").map((l) => JSON.parse(l));
  if (lines.length < 2) throw new Error("summary JSONL needs records plus a summary");
  const summary = lines[lines.length - 1];
  if (!("runs" in summary)) throw new Error("last JSONL line is not a suite summary");
  const records = lines.slice(0, -1) as RunRecord[];
  for (const r of records) {
    if (!("scenario_id" in r) || !("makespan" in r)) {
      throw new Error("malformed run record in summary JSONL");
    }
  }
  return { records, summary: summary as SuiteSummary };
}
