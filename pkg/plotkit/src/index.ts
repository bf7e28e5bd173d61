export {
  PLOT_KINDS,
  PlotKind,
  PlotSpec,
  SchemaError,
  parsePlotSpec,
} from "./schema.js";
export { TRACE_COLUMNS, TraceRow, parseTrace } from "./trace.js";
export {
  ERROR_FLOOR,
  renderConvergence,
  renderDensityHistogram,
  renderDioTimeline,
  renderEnvelope,
} from "./plots.js";
export { loadSpec, renderSpec, renderToFile } from "./render.js";
