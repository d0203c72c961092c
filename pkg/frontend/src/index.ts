export { loadResults, preferAggregates, MissingColumnsError, EmptyCsvError, REQUIRED_COLUMNS } from "./csv.js";
export type { ResultRow } from "./csv.js";
export { render, FIGURE_KINDS, MissingMetricError } from "./figures.js";
export type { FigureKind, PlotSpec } from "./figures.js";
