import * as fs from "node:fs";
import * as path from "node:path";
import { describe, expect, it } from "vitest";
import { parseSummaryJsonl } from "../src/schema.js";
import { renderMetricsTable } from "../src/table.js";

const SUMMARY = path.join(__dirname, "..", "sample", "summary_doorway_pre-smg.jsonl");

describe("metrics table", () => {
  const file = parseSummaryJsonl(fs.readFileSync(SUMMARY, "utf8"));
  const html = renderMetricsTable(file);

  it("renders one row per run plus the suite summary", () => {
    const rows = html.match(/<tr>/g) ?? [];
    expect(rows.length).toBe(1 + file.records.length); // header + 18 runs
    expect(html).toContain(`<tr class="summary">`);
  });

  it("carries the method and scenario in the caption", () => {
    expect(html).toContain("doorway / pre-smg");
    expect(html).toContain(`data-method="pre-smg"`);
  });

  it("shows the aggregate makespan with its spread", () => {
    const m = file.summary.makespan_mean!;
    expect(html).toContain(`${m.toFixed(3)} ±`);
    expect(html).toContain("100%");
  });

  it("escapes HTML in identifiers", () => {
    const hostile = {
      ...file,
      records: [{ ...file.records[0], scenario_id: "<script>x</script>" }],
    };
    const out = renderMetricsTable(hostile);
    expect(out).not.toContain("<script>");
    expect(out).toContain("&lt;script&gt;");
  });
});
