/** SVG trajectory rendering: walls as discs, goals as crosses, one polyline
 * per agent colored by its priority type. Pure string output, no DOM. */
import { GOAL_COLOR, OBSTACLE_COLOR, PRIORITY_COLORS } from "./colors.js";
import type { Scenario, TrajectoryRow } from "./schema.js";

export interface PlotOptions {
  width?: number;
  padding?: number; // world-units margin around the content
}

interface Box {
  minX: number;
  maxX: number;
  minY: number;
  maxY: number;
}

function contentBox(rows: TrajectoryRow[], scenario: Scenario, pad: number): Box {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const r of rows) {
    xs.push(r.x);
    ys.push(r.y);
  }
  for (const [x, y, rad] of scenario.obstacles) {
    xs.push(x - rad, x + rad);
    ys.push(y - rad, y + rad);
  }
  for (const [x, y] of scenario.agent_goals) {
    xs.push(x);
    ys.push(y);
  }
  return {
    minX: Math.min(...xs) - pad,
    maxX: Math.max(...xs) + pad,
    minY: Math.min(...ys) - pad,
    maxY: Math.max(...ys) + pad,
  };
}

export function renderTrajectorySvg(
  rows: TrajectoryRow[],
  scenario: Scenario,
  options: PlotOptions = {},
): string {
  if (rows.length === 0) throw new Error("no trajectory rows to plot");
  const width = options.width ?? 800;
  const box = contentBox(rows, scenario, options.padding ?? 0.3);
  const scale = width / (box.maxX - box.minX);
  const height = Math.round((box.maxY - box.minY) * scale);
  const X = (x: number) => ((x - box.minX) * scale).toFixed(1);
  const Y = (y: number) => ((box.maxY - y) * scale).toFixed(1); // flip y-up to svg

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
  );

  for (const [x, y, rad] of scenario.obstacles) {
    parts.push(
      `<circle cx="${X(x)}" cy="${Y(y)}" r="${(rad * scale).toFixed(1)}" ` +
      `fill="${OBSTACLE_COLOR}" fill-opacity="0.6"/>`,
    );
  }

  for (const [agent, [gx, gy]] of scenario.agent_goals.entries()) {
    const arm = 0.06 * scale;
    const cx = Number(X(gx));
    const cy = Number(Y(gy));
    parts.push(
      `<g stroke="${GOAL_COLOR}" stroke-width="2" data-goal="${agent}">` +
      `<line x1="${cx - arm}" y1="${cy - arm}" x2="${cx + arm}" y2="${cy + arm}"/>` +
      `<line x1="${cx - arm}" y1="${cy + arm}" x2="${cx + arm}" y2="${cy - arm}"/>` +
      `</g>`,
    );
  }

  for (const agent of [0, 1]) {
    const color = PRIORITY_COLORS[scenario.priority_pair[agent]];
    const pts = rows
      .filter((r) => r.agent_id === agent)
      .sort((a, b) => a.t - b.t)
      .map((r) => `${X(r.x)},${Y(r.y)}`)
      .join(" ");
    const [sx, sy] = scenario.agent_starts[agent];
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" ` +
      `stroke-width="2.5" data-agent="${agent}"/>`,
      `<circle cx="${X(sx)}" cy="${Y(sy)}" r="5" fill="${color}"/>`,
    );
  }

  // Legend: priority type per agent.
  for (const agent of [0, 1]) {
    const color = PRIORITY_COLORS[scenario.priority_pair[agent]];
    const y = 20 + 18 * agent;
    parts.push(
      `<rect x="12" y="${y - 10}" width="12" height="12" fill="${color}"/>`,
      `<text x="30" y="${y}" font-family="sans-serif" font-size="13">` +
      `agent ${agent}: ${scenario.priority_pair[agent]}</text>`,
    );
  }

  parts.push("</svg>");
  return parts.join("\n");
}
