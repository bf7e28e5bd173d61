/** Deterministic SVG assembly: fixed canvas, fixed fonts, no timestamps. */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { top: 44, right: 24, bottom: 52, left: 72 };

export const FONT = "DejaVu Sans, Helvetica, Arial, sans-serif";

export const PALETTE = [
  "#4878a8",
  "#e49444",
  "#5ba053",
  "#a87ca0",
  "#85b6b2",
  "#c7b65a",
];
export const ACCENT = "#c44e52";
export const EMPHASIS = "#1f3a5f";
export const GRID = "#d8d8d8";
export const AXIS = "#333333";

export function escapeText(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Fixed-precision coordinate so output never depends on float printing quirks. */
export function px(v: number): string {
  const r = v.toFixed(2);
  return r === "-0.00" ? "0.00" : r;
}

export interface Scale {
  map(v: number): number;
  ticks(): number[];
  domain: [number, number];
}

function niceStep(span: number): number {
  const raw = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const frac = raw / mag;
  if (frac <= 1) return mag;
  if (frac <= 2) return 2 * mag;
  if (frac <= 5) return 5 * mag;
  return 10 * mag;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  let [lo, hi] = domain;
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const [r0, r1] = range;
  return {
    domain: [lo, hi],
    map: (v: number) => r0 + ((v - lo) / (hi - lo)) * (r1 - r0),
    ticks: () => {
      const step = niceStep(hi - lo);
      const out: number[] = [];
      for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
        const snapped = Math.abs(t) < step * 1e-9 ? 0 : t;
        out.push(snapped);
      }
      return out;
    },
  };
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  let [lo, hi] = domain;
  if (!(lo > 0) || !(hi > 0)) {
    throw new Error("log scale needs positive domain");
  }
  if (lo === hi) {
    lo /= 10;
    hi *= 10;
  }
  const [r0, r1] = range;
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  return {
    domain: [lo, hi],
    map: (v: number) => r0 + ((Math.log10(v) - llo) / (lhi - llo)) * (r1 - r0),
    ticks: () => {
      const out: number[] = [];
      const k0 = Math.ceil(llo - 1e-9);
      const k1 = Math.floor(lhi + 1e-9);
      for (let k = k0; k <= k1; k += 1) out.push(Math.pow(10, k));
      if (out.length === 0) out.push(lo, hi);
      return out;
    },
  };
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    return v.toExponential(0).replace("e+", "e");
  }
  return v.toFixed(6).replace(/0+$/, "").replace(/\.$/, "");
}

export interface Frame {
  x: Scale;
  y: Scale;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export function makeFrame(xs: Scale["domain"], ys: Scale["domain"], opts: {
  xLog?: boolean;
  yLog?: boolean;
}): Frame {
  const left = MARGIN.left;
  const right = WIDTH - MARGIN.right;
  const top = MARGIN.top;
  const bottom = HEIGHT - MARGIN.bottom;
  const x = (opts.xLog ? logScale : linearScale)(xs, [left, right]);
  const y = (opts.yLog ? logScale : linearScale)(ys, [bottom, top]);
  return { x, y, left, right, top, bottom };
}

export class SvgDoc {
  private parts: string[] = [];

  constructor(title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
        `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="${FONT}">`,
    );
    this.parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
    this.parts.push(
      `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15" ` +
        `font-weight="bold" fill="${AXIS}">${escapeText(title)}</text>`,
    );
  }

  raw(s: string): void {
    this.parts.push(s);
  }

  line(x1: number, y1: number, x2: number, y2: number, style: string): void {
    this.parts.push(
      `<line x1="${px(x1)}" y1="${px(y1)}" x2="${px(x2)}" y2="${px(y2)}" ${style}/>`,
    );
  }

  polyline(points: Array<[number, number]>, style: string): void {
    const pts = points.map(([a, b]) => `${px(a)},${px(b)}`).join(" ");
    this.parts.push(`<polyline points="${pts}" fill="none" ${style}/>`);
  }

  rect(x: number, y: number, w: number, h: number, style: string): void {
    this.parts.push(
      `<rect x="${px(x)}" y="${px(y)}" width="${px(w)}" height="${px(h)}" ${style}/>`,
    );
  }

  circle(cx: number, cy: number, r: number, style: string): void {
    this.parts.push(`<circle cx="${px(cx)}" cy="${px(cy)}" r="${px(r)}" ${style}/>`);
  }

  text(x: number, y: number, s: string, style: string): void {
    this.parts.push(`<text x="${px(x)}" y="${px(y)}" ${style}>${escapeText(s)}</text>`);
  }

  axes(frame: Frame, xLabel: string, yLabel: string): void {
    const { x, y, left, right, top, bottom } = frame;
    for (const t of x.ticks()) {
      const gx = x.map(t);
      this.line(gx, top, gx, bottom, `stroke="${GRID}" stroke-width="0.5"`);
      this.line(gx, bottom, gx, bottom + 5, `stroke="${AXIS}" stroke-width="1"`);
      this.text(
        gx,
        bottom + 18,
        fmtTick(t),
        `text-anchor="middle" font-size="11" fill="${AXIS}"`,
      );
    }
    for (const t of y.ticks()) {
      const gy = y.map(t);
      this.line(left, gy, right, gy, `stroke="${GRID}" stroke-width="0.5"`);
      this.line(left - 5, gy, left, gy, `stroke="${AXIS}" stroke-width="1"`);
      this.text(
        left - 8,
        gy + 4,
        fmtTick(t),
        `text-anchor="end" font-size="11" fill="${AXIS}"`,
      );
    }
    this.line(left, bottom, right, bottom, `stroke="${AXIS}" stroke-width="1.2"`);
    this.line(left, top, left, bottom, `stroke="${AXIS}" stroke-width="1.2"`);
    this.text(
      (left + right) / 2,
      HEIGHT - 14,
      xLabel,
      `text-anchor="middle" font-size="12" fill="${AXIS}"`,
    );
    this.text(
      18,
      (top + bottom) / 2,
      yLabel,
      `text-anchor="middle" font-size="12" fill="${AXIS}" ` +
        `transform="rotate(-90 18 ${px((top + bottom) / 2)})"`,
    );
  }

  legend(frame: Frame, entries: Array<{ label: string; style: string; dashed?: boolean }>): void {
    let yPos = frame.top + 12;
    const xPos = frame.right - 210;
    for (const e of entries) {
      this.line(
        xPos,
        yPos - 4,
        xPos + 26,
        yPos - 4,
        `${e.style}${e.dashed ? ' stroke-dasharray="6 4"' : ""}`,
      );
      this.text(xPos + 32, yPos, e.label, `font-size="11" fill="${AXIS}"`);
      yPos += 16;
    }
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}
