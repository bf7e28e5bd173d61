import { readFileSync, writeFileSync } from "node:fs";
import {
  densitySummarySchema,
  envelopeSummarySchema,
  parsePlotSpec,
  parseSummary,
  PlotSpec,
  SchemaError,
} from "./schema.js";
import { parseTrace, TraceRow } from "./trace.js";
import {
  renderConvergence,
  renderDensityHistogram,
  renderDioTimeline,
  renderEnvelope,
} from "./plots.js";

function readText(path: string): string {
  try {
    return readFileSync(path, "utf8");
  } catch (err) {
    throw new SchemaError(`${path}: ${(err as Error).message}`);
  }
}

function readJson(path: string): unknown {
  const text = readText(path);
  try {
    return JSON.parse(text);
  } catch (err) {
    throw new SchemaError(`${path}: invalid JSON: ${(err as Error).message}`);
  }
}

export function loadSpec(path: string): PlotSpec {
  return parsePlotSpec(readJson(path), path);
}

/** Produce the SVG for a validated spec without touching the output file. */
export function renderSpec(spec: PlotSpec): string {
  let rows: TraceRow[] | undefined;
  if (spec.trace) {
    rows = parseTrace(readText(spec.trace), spec.trace);
  }
  const title = spec.title ?? spec.kind;
  switch (spec.kind) {
    case "convergence":
      return renderConvergence(rows!, title);
    case "discrepancy-envelope": {
      const summary = parseSummary(
        envelopeSummarySchema,
        readJson(spec.summary!),
        spec.summary!,
      );
      return renderEnvelope(rows!, summary, title);
    }
    case "density-histogram": {
      const summary = parseSummary(
        densitySummarySchema,
        readJson(spec.summary!),
        spec.summary!,
      );
      return renderDensityHistogram(summary, title);
    }
    case "dio-timeline":
      return renderDioTimeline(rows!, title);
  }
}

export function renderToFile(specPath: string): string {
  const spec = loadSpec(specPath);
  const svg = renderSpec(spec);
  writeFileSync(spec.output, svg, "utf8");
  return spec.output;
}
