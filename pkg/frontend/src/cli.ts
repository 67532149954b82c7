#!/usr/bin/env node
/** Render artifacts from a socialnav run directory.
 *
 * Usage:
 *   socialnav-render <run-dir> [--out <dir>]            -> plot.svg
 *   socialnav-render --summary <file.jsonl> [--out dir] -> metrics.html
 */
import * as fs from "node:fs";
import * as path from "node:path";
import { parseScenario, parseSummaryJsonl, parseTrajectoryCsv } from "./schema.js";
import { renderTrajectorySvg } from "./plot.js";
import { renderMetricsTable } from "./table.js";

function fail(msg: string): never {
  console.error(msg);
  process.exit(1);
}

const args = process.argv.slice(2);
let runDir: string | null = null;
let summaryPath: string | null = null;
let outDir = ".";
for (let i = 0; i < args.length; i++) {
  if (args[i] === "--out") outDir = args[++i] ?? fail("--out needs a value");
  else if (args[i] === "--summary") summaryPath = args[++i] ?? fail("--summary needs a value");
  else if (runDir === null) runDir = args[i];
  else fail(`unexpected argument: ${args[i]}`);
}
if (runDir === null && summaryPath === null) {
  fail("usage: socialnav-render <run-dir> [--summary file.jsonl] [--out dir]");
}
fs.mkdirSync(outDir, { recursive: true });

if (runDir !== null) {
  const rows = parseTrajectoryCsv(
    fs.readFileSync(path.join(runDir, "trajectory.csv"), "utf8"));
  const scenario = parseScenario(
    fs.readFileSync(path.join(runDir, "scenario.json"), "utf8"));
  const svg = renderTrajectorySvg(rows, scenario);
  const dest = path.join(outDir, `${path.basename(runDir)}.svg`);
  fs.writeFileSync(dest, svg);
  console.log(dest);
}

if (summaryPath !== null) {
  const file = parseSummaryJsonl(fs.readFileSync(summaryPath, "utf8"));
  const html = `<!doctype html>\n<meta charset="utf-8">\n<style>
table.socialnav-metrics { border-collapse: collapse; font-family: sans-serif; }
table.socialnav-metrics td, table.socialnav-metrics th
  { border: 1px solid #ccc; padding: 4px 8px; font-size: 13px; }
tr.summary { font-weight: bold; background: #f4f4f4; }
</style>\n${renderMetricsTable(file)}\n`;
  const base = path.basename(summaryPath).replace(/\.jsonl$/, "");
  const dest = path.join(outDir, `${base}.html`);
  fs.writeFileSync(dest, html);
  console.log(dest);
}
