/** Metrics tables from a summary JSONL: per-run HTML rows plus a suite footer. */
import type { RunRecord, SuiteSummary, SummaryFile } from "./schema.js";

function fmt(v: number | null | undefined, digits = 3): string {
  return v === null || v === undefined ? "N/A" : v.toFixed(digits);
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

const HEADERS = ["scenario", "collisions", "deadlocks", "correct priority",
                 "makespan (s)", "min follower v (m/s)", "path dev (m)",
                 "min h", "consensus (s)"];

function recordRow(r: RunRecord): string {
  const cells = [
    esc(r.scenario_id),
    String(r.collisions),
    String(r.deadlocks),
    r.correct_priority === null ? "N/A" : String(r.correct_priority),
    fmt(r.makespan),
    fmt(r.min_follower_v),
    fmt(r.path_dev_avg, 4),
    fmt(r.min_h, 4),
    fmt(r.consensus_time, 1),
  ];
  return `<tr>${cells.map((c) => `<td>${c}</td>`).join("")}</tr>`;
}

function summaryRow(s: SuiteSummary): string {
  const makespan = s.makespan_mean === null
    ? "N/A"
    : `${fmt(s.makespan_mean)} ± ${fmt(s.makespan_std)}`;
  const cells = [
    `suite mean (${s.runs} runs)`,
    String(s.collisions),
    String(s.deadlock_runs),
    s.pct_correct_priority === null ? "N/A" : `${s.pct_correct_priority.toFixed(0)}%`,
    makespan,
    fmt(s.min_v_mean),
    fmt(s.path_dev_mean, 4),
    "",
    "",
  ];
  return `<tr class="summary">${cells.map((c) => `<td>${c}</td>`).join("")}</tr>`;
}

export function renderMetricsTable(file: SummaryFile): string {
  const head = HEADERS.map((h) => `<th>${h}</th>`).join("");
  const body = file.records.map(recordRow).join("\n");
  return [
    `<table class="socialnav-metrics" data-method="${esc(file.summary.method)}">`,
    `<caption>${esc(file.summary.scenario)} / ${esc(file.summary.method)}</caption>`,
    `<thead><tr>${head}</tr></thead>`,
    `<tbody>`,
    body,
    summaryRow(file.summary),
    `</tbody>`,
    `</table>`,
  ].join("\n");
}
