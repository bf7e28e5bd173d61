import Papa from "papaparse";
import { SchemaError } from "./schema.js";

/** Column layout every trace file declares in its header row. */
export const TRACE_COLUMNS = [
  "experiment",
  "alpha",
  "x_index",
  "N",
  "stat",
  "re",
  "im",
  "target_re",
  "target_im",
  "abs_err",
] as const;

export interface TraceRow {
  experiment: string;
  alpha: string;
  x_index: number;
  N: number;
  stat: string;
  re: number;
  im: number;
  target_re: number;
  target_im: number;
  abs_err: number;
}

const NUMERIC: Array<keyof TraceRow> = [
  "x_index",
  "N",
  "re",
  "im",
  "target_re",
  "target_im",
  "abs_err",
];

function toNumber(text: string, column: string, line: number, source: string): number {
  const t = text.trim();
  if (t === "inf") return Infinity;
  if (t === "-inf") return -Infinity;
  if (t === "nan") return NaN;
  const v = Number(t);
  if (t === "" || Number.isNaN(v)) {
    throw new SchemaError(
      `${source}: column ${column}: non-numeric value "${text}" at data row ${line}`,
    );
  }
  return v;
}

export function parseTrace(text: string, source: string): TraceRow[] {
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  for (const column of TRACE_COLUMNS) {
    if (!fields.includes(column)) {
      throw new SchemaError(`${source}: missing column ${column}`);
    }
  }
  const rows: TraceRow[] = [];
  parsed.data.forEach((record, i) => {
    const row: Record<string, string | number> = {};
    for (const column of TRACE_COLUMNS) {
      const cell = record[column];
      if (cell === undefined) {
        throw new SchemaError(
          `${source}: column ${column}: missing value at data row ${i + 1}`,
        );
      }
      row[column] = NUMERIC.includes(column as keyof TraceRow)
        ? toNumber(cell, column, i + 1, source)
        : cell;
    }
    rows.push(row as unknown as TraceRow);
  });
  if (rows.length === 0) {
    throw new SchemaError(`${source}: no data rows`);
  }
  return rows;
}

/** Rows carrying one statistic, in file order. */
export function statRows(rows: TraceRow[], stat: string): TraceRow[] {
  return rows.filter((r) => r.stat === stat);
}

/** Rows whose statistic matches a prefix, e.g. every birkhoff flavour. */
export function statPrefixRows(rows: TraceRow[], prefix: string): TraceRow[] {
  return rows.filter((r) => r.stat === prefix || r.stat.startsWith(prefix + "_"));
}

export function requireStat(
  rows: TraceRow[],
  stat: string,
  source: string,
): TraceRow[] {
  const found = statRows(rows, stat);
  if (found.length === 0) {
    throw new SchemaError(`${source}: no rows with stat ${stat}`);
  }
  return found;
}
