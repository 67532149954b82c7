export {
  CSV_COLUMNS,
  parseScenario,
  parseSummaryJsonl,
  parseTrajectoryCsv,
  serializeTrajectoryCsv,
} from "./schema.js";
export type {
  PriorityType,
  RunRecord,
  Scenario,
  SuiteSummary,
  SummaryFile,
  TrajectoryRow,
} from "./schema.js";
export { PRIORITY_COLORS } from "./colors.js";
export { renderTrajectorySvg } from "./plot.js";
export { renderMetricsTable } from "./table.js";
