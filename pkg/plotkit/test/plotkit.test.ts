import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { spawnSync } from "node:child_process";
import { describe, expect, it } from "vitest";
import {
  parsePlotSpec,
  parseTrace,
  renderConvergence,
  renderDensityHistogram,
  renderDioTimeline,
  renderEnvelope,
  renderSpec,
  SchemaError,
} from "../src/index.js";
import { densitySummarySchema, envelopeSummarySchema, parseSummary } from "../src/schema.js";

const HEADER = "experiment,alpha,x_index,N,stat,re,im,target_re,target_im,abs_err";

function traceText(rows: Array<Array<string | number>>): string {
  return [HEADER, ...rows.map((r) => r.join(","))].join("\n") + "\n";
}

function convergenceRows(errs: number[][]): string {
  const ns = [100, 1000, 10000];
  const rows: Array<Array<string | number>> = [];
  errs.forEach((sample, i) => {
    sample.forEach((e, j) => {
      rows.push(["periodic-average", "2", i, ns[j]!, "birkhoff", 2 + e, 0, 2, 0, 0]);
    });
  });
  return traceText(rows);
}

const GOLDEN_SUMMARY = {
  density: { breaks: [0.618033988749895, 1.0], values: [1.1708203932499369, 0.7236067977499789] },
  beta_histogram: {
    edges: [0, 0.25, 0.5, 0.75, 1],
    density: [1.2, 1.1, 0.9, 0.8],
  },
};

describe("trace parsing", () => {
  it("reads every declared column", () => {
    const rows = parseTrace(
      traceText([["weyl-ud", "golden", 0, 100, "star", 0.01, 0, 0, 0, "nan"]]),
      "trace.csv",
    );
    expect(rows).toHaveLength(1);
    expect(rows[0]!.N).toBe(100);
    expect(rows[0]!.alpha).toBe("golden");
    expect(Number.isNaN(rows[0]!.abs_err)).toBe(true);
  });

  it("names a missing column", () => {
    const text =
      "experiment,alpha,x_index,N,stat,re,im,target_re,target_im\n" +
      "weyl-ud,2,0,100,star,0.01,0,0,0\n";
    expect(() => parseTrace(text, "trace.csv")).toThrowError(/missing column abs_err/);
  });

  it("names a non-numeric cell", () => {
    const text = traceText([["weyl-ud", "2", 0, 100, "star", "bogus", 0, 0, 0, 0]]);
    expect(() => parseTrace(text, "trace.csv")).toThrowError(/column re: non-numeric/);
  });

  it("rejects an empty file", () => {
    expect(() => parseTrace(HEADER + "\n", "trace.csv")).toThrowError(/no data rows/);
  });
});

describe("plot spec", () => {
  it("rejects an unknown kind", () => {
    expect(() =>
      parsePlotSpec({ kind: "pie", output: "x.svg" }, "spec.json"),
    ).toThrowError(/kind/);
  });

  it("requires the trace input for convergence", () => {
    expect(() =>
      parsePlotSpec({ kind: "convergence", output: "x.svg" }, "spec.json"),
    ).toThrowError(/trace: required/);
  });

  it("requires the summary input for density-histogram", () => {
    expect(() =>
      parsePlotSpec({ kind: "density-histogram", output: "x.svg" }, "spec.json"),
    ).toThrowError(/summary: required/);
  });
});

describe("summary validation", () => {
  it("names a missing envelope key", () => {
    expect(() =>
      parseSummary(envelopeSummarySchema, { thresholds: {} }, "summary.json"),
    ).toThrowError(/c_hat_max/);
  });

  it("names a missing density key", () => {
    expect(() =>
      parseSummary(densitySummarySchema, { density: GOLDEN_SUMMARY.density }, "summary.json"),
    ).toThrowError(/beta_histogram/);
  });
});

describe("convergence plot", () => {
  it("draws per-sample polylines and a median line", () => {
    const text = convergenceRows([
      [0.1, 0.03, 0.01],
      [0.2, 0.05, 0.008],
      [0.15, 0.04, 0.012],
    ]);
    const svg = renderConvergence(parseTrace(text, "t"), "demo");
    expect(svg).toContain("<svg");
    expect(svg).toContain("polyline");
    expect(svg).toContain("median error");
  });

  it("puts an all-zero-error trace on the plot floor", () => {
    const text = convergenceRows([
      [0, 0, 0],
      [0, 0, 0],
    ]);
    const svg = renderConvergence(parseTrace(text, "t"), "demo");
    expect(svg).toContain("<svg");
    expect(svg).toContain("1e-16");
  });

  it("is deterministic", () => {
    const text = convergenceRows([[0.1, 0.01, 0.001]]);
    const rows = parseTrace(text, "t");
    expect(renderConvergence(rows, "demo")).toBe(renderConvergence(rows, "demo"));
  });
});

describe("discrepancy-envelope plot", () => {
  it("overlays the fitted envelope", () => {
    const data = traceText([
      ["weyl-ud", "2", 0, 100, "star", 0.05, 0, 0, 0, "nan"],
      ["weyl-ud", "2", 0, 1000, "star", 0.02, 0, 0, 0, "nan"],
      ["weyl-ud", "2", 0, 10000, "star", 0.009, 0, 0, 0, "nan"],
    ]);
    const summary = { c_hat_max: 0.8, thresholds: { envelope_epsilon: 0.1 } };
    const svg = renderEnvelope(
      parseTrace(data, "t"),
      parseSummary(envelopeSummarySchema, summary, "s"),
      "demo",
    );
    expect(svg).toContain("stroke-dasharray");
    expect(svg).toContain("(log N)^1.6");
  });
});

describe("density-histogram plot", () => {
  it("labels both density levels to six decimals", () => {
    const svg = renderDensityHistogram(
      parseSummary(densitySummarySchema, GOLDEN_SUMMARY, "s"),
      "demo",
    );
    expect(svg).toContain("1.170820");
    expect(svg).toContain("0.723607");
    expect(svg).toContain("<rect");
  });

  it("rejects mismatched histogram arrays", () => {
    const bad = {
      density: GOLDEN_SUMMARY.density,
      beta_histogram: { edges: [0, 1], density: [1, 2] },
    };
    expect(() =>
      renderDensityHistogram(parseSummary(densitySummarySchema, bad, "s"), "demo"),
    ).toThrowError(SchemaError);
  });
});

describe("dio-timeline plot", () => {
  const rowsFor = (entries: Array<[number, number, number, number]>) =>
    traceText(
      entries.flatMap(([i, vc, mv, sus]) => [
        ["dio-scan", "golden", i, 1000, "violation_count", vc, 0, 0, 0, 0],
        ["dio-scan", "golden", i, 1000, "max_violation", mv, 0, 0, 0, 0],
        ["dio-scan", "golden", i, 1000, "hit_count", 3, 0, 0, 0, 0],
        ["dio-scan", "golden", i, 1000, "suspect", sus, 0, 0, 0, 0],
      ]),
    );

  it("marks samples and the early cutoff", () => {
    const svg = renderDioTimeline(
      parseTrace(
        rowsFor([
          [0, 2, 40, 0],
          [1, 0, 0, 0],
          [2, 30, 990, 1],
        ]),
        "t",
      ),
      "demo",
    );
    expect(svg).toContain("N/3");
    expect(svg).toContain("suspect exceptional");
  });

  it("names a missing statistic", () => {
    const text = traceText([["dio-scan", "golden", 0, 1000, "hit_count", 3, 0, 0, 0, 0]]);
    expect(() => renderDioTimeline(parseTrace(text, "t"), "demo")).toThrowError(
      /violation_count/,
    );
  });
});

describe("cli", () => {
  const cli = new URL("../dist/cli.js", import.meta.url).pathname;

  function run(args: string[]) {
    return spawnSync(process.execPath, [cli, ...args], { encoding: "utf8" });
  }

  it("renders a spec end to end, deterministically", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
    const trace = join(dir, "trace.csv");
    writeFileSync(trace, convergenceRows([[0.1, 0.01, 0.001]]));
    const out1 = join(dir, "a.svg");
    const out2 = join(dir, "b.svg");
    for (const out of [out1, out2]) {
      const spec = join(dir, "spec.json");
      writeFileSync(spec, JSON.stringify({ kind: "convergence", trace, output: out }));
      const res = run(["render", "--spec", spec]);
      expect(res.status).toBe(0);
    }
    const a = readFileSync(out1, "utf8");
    expect(a.startsWith("<svg")).toBe(true);
    expect(a).toBe(readFileSync(out2, "utf8"));
  });

  it("exits nonzero naming the offending column", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
    const trace = join(dir, "trace.csv");
    writeFileSync(
      trace,
      "experiment,alpha,x_index,N,stat,re,im,target_re,target_im\n" +
        "periodic-average,2,0,100,birkhoff,2,0,2,0\n",
    );
    const spec = join(dir, "spec.json");
    const out = join(dir, "x.svg");
    writeFileSync(spec, JSON.stringify({ kind: "convergence", trace, output: out }));
    const res = run(["render", "--spec", spec]);
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("abs_err");
  });

  it("exits nonzero on an unknown kind", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
    const spec = join(dir, "spec.json");
    writeFileSync(spec, JSON.stringify({ kind: "scatter3d", output: "x.svg" }));
    const res = run(["render", "--spec", spec]);
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("kind");
  });
});

describe("renderSpec dispatch", () => {
  it("renders the histogram kind from files", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
    const summary = join(dir, "summary.json");
    writeFileSync(summary, JSON.stringify(GOLDEN_SUMMARY));
    const svg = renderSpec({
      kind: "density-histogram",
      summary,
      output: join(dir, "x.svg"),
    });
    expect(svg).toContain("1.170820");
  });
});
