import type { PriorityType } from "./schema.js";

/** Canonical priority-type color map used by every plot. */
export const PRIORITY_COLORS: Record<PriorityType, string> = {
  hospital: "#d62728", // red: most urgent
  airport: "#ff9f1c",  // amber
  grocery: "#1f77b4",  // blue: least urgent
};

export const OBSTACLE_COLOR = "#888888";
export const GOAL_COLOR = "#2ca02c";
