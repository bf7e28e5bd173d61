import {
  DensitySummary,
  EnvelopeSummary,
  SchemaError,
} from "./schema.js";
import { requireStat, statPrefixRows, TraceRow } from "./trace.js";
import {
  ACCENT,
  EMPHASIS,
  Frame,
  fmtTick,
  makeFrame,
  PALETTE,
  SvgDoc,
} from "./svg.js";

/** Errors this small are drawn at the plot floor instead of breaking the log axis. */
export const ERROR_FLOOR = 1e-16;

interface Series {
  key: string;
  points: Array<[number, number]>;
}

function groupSeries(
  rows: TraceRow[],
  value: (r: TraceRow) => number,
): Series[] {
  const byKey = new Map<string, Array<[number, number]>>();
  for (const r of rows) {
    const key = `${r.x_index}:${r.stat}`;
    if (!byKey.has(key)) byKey.set(key, []);
    byKey.get(key)!.push([r.N, value(r)]);
  }
  const out: Series[] = [];
  for (const key of [...byKey.keys()].sort()) {
    const pts = byKey.get(key)!;
    pts.sort((a, b) => a[0] - b[0]);
    out.push({ key, points: pts });
  }
  return out;
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

function medianSeries(series: Series[]): Array<[number, number]> {
  const byN = new Map<number, number[]>();
  for (const s of series) {
    for (const [n, v] of s.points) {
      if (!byN.has(n)) byN.set(n, []);
      byN.get(n)!.push(v);
    }
  }
  const ns = [...byN.keys()].sort((a, b) => a - b);
  return ns.map((n) => {
    const vals = byN.get(n)!.slice().sort((a, b) => a - b);
    const mid = Math.floor(vals.length / 2);
    const med =
      vals.length % 2 === 1 ? vals[mid]! : (vals[mid - 1]! + vals[mid]!) / 2;
    return [n, med];
  });
}

function drawSeries(doc: SvgDoc, frame: Frame, series: Series[]): void {
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    const pts = s.points.map(
      ([n, v]) => [frame.x.map(n), frame.y.map(v)] as [number, number],
    );
    if (pts.length === 1) {
      doc.circle(pts[0]![0], pts[0]![1], 2.5, `fill="${color}" fill-opacity="0.6"`);
    } else {
      doc.polyline(
        pts,
        `stroke="${color}" stroke-width="1" stroke-opacity="0.55"`,
      );
    }
  });
}

/** Absolute error of each partial average against its stated target, floored. */
export function renderConvergence(rows: TraceRow[], title: string): string {
  const avg = statPrefixRows(rows, "birkhoff");
  if (avg.length === 0) {
    throw new SchemaError("trace: no rows with stat birkhoff");
  }
  const series = groupSeries(avg, (r) =>
    Math.max(Math.hypot(r.re - r.target_re, r.im - r.target_im), ERROR_FLOOR),
  );
  const allPts = series.flatMap((s) => s.points);
  const [nLo, nHi] = extent(allPts.map((p) => p[0]));
  let [eLo, eHi] = extent(allPts.map((p) => p[1]));
  if (eHi / eLo < 1e4) eHi = eLo * 1e4;
  const frame = makeFrame([nLo, nHi], [eLo, eHi], { xLog: true, yLog: true });
  const doc = new SvgDoc(title);
  doc.axes(frame, "N", "|S_N - target|");
  drawSeries(doc, frame, series);
  if (series.length >= 3) {
    const med = medianSeries(series).map(
      ([n, v]) => [frame.x.map(n), frame.y.map(v)] as [number, number],
    );
    doc.polyline(med, `stroke="${EMPHASIS}" stroke-width="2.2"`);
    doc.legend(frame, [
      { label: "per-sample error", style: `stroke="${PALETTE[0]}" stroke-width="1"` },
      { label: "median error", style: `stroke="${EMPHASIS}" stroke-width="2.2"` },
    ]);
  }
  return doc.render();
}

/** Star discrepancy per sample with the fitted envelope overlaid. */
export function renderEnvelope(
  rows: TraceRow[],
  summary: EnvelopeSummary,
  title: string,
): string {
  const stars = requireStat(rows, "star", "trace");
  const series = groupSeries(stars, (r) => Math.max(r.re, ERROR_FLOOR));
  const allPts = series.flatMap((s) => s.points);
  const [nLo, nHi] = extent(allPts.map((p) => p[0]));
  const c = summary.c_hat_max;
  const eps = summary.thresholds?.envelope_epsilon ?? 0.1;
  const exponent = 1.5 + eps;
  const curve: Array<[number, number]> = [];
  const steps = 48;
  for (let i = 0; i <= steps; i += 1) {
    const n = Math.exp(
      Math.log(nLo) + ((Math.log(nHi) - Math.log(nLo)) * i) / steps,
    );
    const v = (c * Math.pow(Math.log(n), exponent)) / Math.sqrt(n);
    curve.push([n, Math.max(v, ERROR_FLOOR)]);
  }
  const [dLo, dHi] = extent([
    ...allPts.map((p) => p[1]),
    ...curve.map((p) => p[1]),
  ]);
  const frame = makeFrame([nLo, nHi], [dLo, dHi], { xLog: true, yLog: true });
  const doc = new SvgDoc(title);
  doc.axes(frame, "N", "star discrepancy");
  drawSeries(doc, frame, series);
  doc.polyline(
    curve.map(([n, v]) => [frame.x.map(n), frame.y.map(v)] as [number, number]),
    `stroke="${ACCENT}" stroke-width="2" stroke-dasharray="6 4"`,
  );
  const expLabel = String(Number(exponent.toFixed(4)));
  doc.legend(frame, [
    { label: "D*_N per sample", style: `stroke="${PALETTE[0]}" stroke-width="1"` },
    {
      label: `${fmtTick(c)} (log N)^${expLabel} / sqrt(N)`,
      style: `stroke="${ACCENT}" stroke-width="2"`,
      dashed: true,
    },
  ]);
  return doc.render();
}

/** Empirical digit histogram with the exact invariant density stepped on top. */
export function renderDensityHistogram(
  summary: DensitySummary,
  title: string,
): string {
  const { edges, density } = summary.beta_histogram;
  if (density.length !== edges.length - 1) {
    throw new SchemaError(
      "summary: beta_histogram: density length must be edges length - 1",
    );
  }
  const { breaks, values } = summary.density;
  if (values.length !== breaks.length) {
    throw new SchemaError(
      "summary: density: breaks and values must have equal length",
    );
  }
  const xLo = Math.min(0, edges[0]!);
  const xHi = Math.max(edges[edges.length - 1]!, breaks[breaks.length - 1]!);
  const yHi = 1.15 * Math.max(...density, ...values, 1e-12);
  const frame = makeFrame([xLo, xHi], [0, yHi], {});
  const doc = new SvgDoc(title);
  doc.axes(frame, "x", "density");
  for (let i = 0; i < density.length; i += 1) {
    const x0 = frame.x.map(edges[i]!);
    const x1 = frame.x.map(edges[i + 1]!);
    const yv = frame.y.map(density[i]!);
    doc.rect(
      x0,
      yv,
      x1 - x0,
      frame.y.map(0) - yv,
      `fill="#9ecae1" stroke="#6baed6" stroke-width="0.8"`,
    );
  }
  let prev = xLo;
  const labelled = new Set<string>();
  for (let i = 0; i < breaks.length; i += 1) {
    const level = values[i]!;
    const y = frame.y.map(level);
    const x0 = frame.x.map(prev);
    const x1 = frame.x.map(breaks[i]!);
    doc.line(x0, y, x1, y, `stroke="${ACCENT}" stroke-width="2.2"`);
    if (i + 1 < breaks.length) {
      const yNext = frame.y.map(values[i + 1]!);
      doc.line(
        x1,
        y,
        x1,
        yNext,
        `stroke="${ACCENT}" stroke-width="1" stroke-dasharray="3 3"`,
      );
    }
    const label = level.toFixed(6);
    if (!labelled.has(label)) {
      labelled.add(label);
      doc.text(
        (x0 + x1) / 2,
        y - 7,
        label,
        `text-anchor="middle" font-size="11" fill="${ACCENT}"`,
      );
    }
    prev = breaks[i]!;
  }
  doc.legend(frame, [
    { label: "orbit histogram", style: `stroke="#6baed6" stroke-width="6"` },
    { label: "invariant density", style: `stroke="${ACCENT}" stroke-width="2.2"` },
  ]);
  return doc.render();
}

/** Largest violating index per sample, against the early-regime cutoff. */
export function renderDioTimeline(rows: TraceRow[], title: string): string {
  const counts = requireStat(rows, "violation_count", "trace");
  const maxima = requireStat(rows, "max_violation", "trace");
  const flags = new Map(
    rows.filter((r) => r.stat === "suspect").map((r) => [r.x_index, r.re]),
  );
  const maxByIndex = new Map(maxima.map((r) => [r.x_index, r.re]));
  const depth = Math.max(...rows.map((r) => r.N));
  const idx = counts.map((r) => r.x_index);
  const [iLo, iHi] = extent(idx);
  const frame = makeFrame(
    [iLo - 0.5, iHi + 0.5],
    [0, depth * 1.05],
    {},
  );
  const doc = new SvgDoc(title);
  doc.axes(frame, "sample index", "largest violating n");
  const cutoff = depth / 3;
  const yCut = frame.y.map(cutoff);
  doc.line(
    frame.left,
    yCut,
    frame.right,
    yCut,
    `stroke="#777777" stroke-width="1.4" stroke-dasharray="7 4"`,
  );
  doc.text(
    frame.right - 4,
    yCut - 6,
    "N/3",
    `text-anchor="end" font-size="11" fill="#777777"`,
  );
  for (const r of counts) {
    const x = frame.x.map(r.x_index);
    const suspect = (flags.get(r.x_index) ?? 0) !== 0;
    const color = suspect ? ACCENT : PALETTE[0]!;
    const mv = maxByIndex.get(r.x_index) ?? 0;
    if (r.re > 0) {
      const top = frame.y.map(mv);
      doc.line(x, frame.y.map(0), x, top, `stroke="${color}" stroke-width="1"`);
      doc.circle(x, top, 3, `fill="${color}"`);
    } else {
      doc.circle(x, frame.y.map(0), 2, `fill="${color}" fill-opacity="0.7"`);
    }
  }
  doc.legend(frame, [
    { label: "finite violations", style: `stroke="${PALETTE[0]}" stroke-width="3"` },
    { label: "suspect exceptional", style: `stroke="${ACCENT}" stroke-width="3"` },
  ]);
  return doc.render();
}
