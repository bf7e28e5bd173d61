import { z } from "zod";

/** Raised for any input that does not match a declared schema. */
export class SchemaError extends Error {}

export const PLOT_KINDS = [
  "convergence",
  "discrepancy-envelope",
  "density-histogram",
  "dio-timeline",
] as const;

export type PlotKind = (typeof PLOT_KINDS)[number];

export const plotSpecSchema = z
  .object({
    kind: z.enum(PLOT_KINDS),
    trace: z.string().optional(),
    summary: z.string().optional(),
    output: z.string(),
    title: z.string().optional(),
  })
  .strict();

export type PlotSpec = z.infer<typeof plotSpecSchema>;

/** Input files each plot kind reads. */
export const KIND_INPUTS: Record<PlotKind, { trace: boolean; summary: boolean }> = {
  convergence: { trace: true, summary: false },
  "discrepancy-envelope": { trace: true, summary: true },
  "density-histogram": { trace: false, summary: true },
  "dio-timeline": { trace: true, summary: false },
};

export function parsePlotSpec(raw: unknown, source: string): PlotSpec {
  const res = plotSpecSchema.safeParse(raw);
  if (!res.success) {
    const issue = res.error.issues[0];
    const path = issue && issue.path.length ? issue.path.join(".") : "spec";
    const message = issue ? issue.message : "invalid spec";
    throw new SchemaError(`${source}: ${path}: ${message}`);
  }
  const spec = res.data;
  const needs = KIND_INPUTS[spec.kind];
  if (needs.trace && !spec.trace) {
    throw new SchemaError(`${source}: trace: required for kind ${spec.kind}`);
  }
  if (needs.summary && !spec.summary) {
    throw new SchemaError(`${source}: summary: required for kind ${spec.kind}`);
  }
  return spec;
}

const histogramSchema = z.object({
  edges: z.array(z.number()).min(2),
  density: z.array(z.number()).min(1),
});

const densityStepSchema = z.object({
  breaks: z.array(z.number()).min(1),
  values: z.array(z.number()).min(1),
});

export const densitySummarySchema = z
  .object({
    density: densityStepSchema,
    beta_histogram: histogramSchema,
  })
  .passthrough();

export type DensitySummary = z.infer<typeof densitySummarySchema>;

export const envelopeSummarySchema = z
  .object({
    c_hat_max: z.number(),
    thresholds: z
      .object({ envelope_epsilon: z.number().optional() })
      .passthrough()
      .optional(),
  })
  .passthrough();

export type EnvelopeSummary = z.infer<typeof envelopeSummarySchema>;

export function parseSummary<T>(
  schema: z.ZodType<T>,
  raw: unknown,
  source: string,
): T {
  const res = schema.safeParse(raw);
  if (!res.success) {
    const issue = res.error.issues[0];
    const path = issue && issue.path.length ? issue.path.join(".") : "summary";
    const detail =
      issue && issue.code === "invalid_type" && issue.received === "undefined"
        ? "missing key"
        : issue
          ? issue.message
          : "invalid summary";
    throw new SchemaError(`${source}: ${path}: ${detail}`);
  }
  return res.data;
}
