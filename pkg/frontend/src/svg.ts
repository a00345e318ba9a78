/** Minimal deterministic SVG plotting: linear/log scales, line and scatter
 *  marks, error bars, reference lines, multi-panel layout. */

export type ScaleKind = "linear" | "log";

export interface Scale {
  kind: ScaleKind;
  domain: [number, number];
  range: [number, number];
  map(v: number): number;
}

export function makeScale(kind: ScaleKind, domain: [number, number], range: [number, number]): Scale {
  let [d0, d1] = domain;
  if (kind === "log" && (d0 <= 0 || d1 <= 0)) {
    throw new Error(`log scale needs positive domain, got [${d0}, ${d1}]`);
  }
  if (d0 === d1) {
    // degenerate domain: pad so a single value lands mid-range
    d0 = kind === "log" ? d0 / 2 : d0 - 1;
    d1 = kind === "log" ? d1 * 2 : d1 + 1;
  }
  const t0 = kind === "log" ? Math.log10(d0) : d0;
  const t1 = kind === "log" ? Math.log10(d1) : d1;
  return {
    kind,
    domain: [d0, d1],
    range,
    map(v: number): number {
      const t = kind === "log" ? Math.log10(v) : v;
      return range[0] + ((t - t0) / (t1 - t0)) * (range[1] - range[0]);
    },
  };
}

export function ticks(scale: Scale, count = 6): number[] {
  const [d0, d1] = scale.domain;
  if (scale.kind === "log") {
    const out: number[] = [];
    for (let e = Math.ceil(Math.log10(d0)); Math.pow(10, e) <= d1 * 1.0001; e++) {
      out.push(Math.pow(10, e));
    }
    return out.length >= 2 ? out : [d0, d1];
  }
  const span = d1 - d0;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / count / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = mult * step;
  const out: number[] = [];
  for (let v = Math.ceil(d0 / s) * s; v <= d1 + s * 1e-9; v += s) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];

export function color(i: number): string {
  return PALETTE[i % PALETTE.length];
}

const fmtCoord = (v: number) => (Math.round(v * 100) / 100).toFixed(2);

export function fmtTick(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e4 || Math.abs(v) < 1e-3)) {
    return v.toExponential(0).replace("e+", "e");
  }
  return String(Number(v.toPrecision(6)));
}

export interface Series {
  label: string;
  x: number[];
  y: number[];
  yerr?: number[];
  mode: "line" | "points" | "line+points";
  color?: string;
  dashed?: boolean;
}

export interface RefLine {
  value: number;
  axis: "x" | "y";
  label?: string;
  color?: string;
  dashed?: boolean;
}

export interface Panel {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: ScaleKind;
  yScale: ScaleKind;
  series: Series[];
  refLines: RefLine[];
}

const W = 460;
const H = 360;
const MARGIN = { left: 62, right: 16, top: 30, bottom: 46 };

function finiteExtent(values: number[], positiveOnly: boolean): [number, number] {
  const ok = values.filter((v) => Number.isFinite(v) && (!positiveOnly || v > 0));
  if (ok.length === 0) return positiveOnly ? [0.1, 10] : [0, 1];
  return [Math.min(...ok), Math.max(...ok)];
}

function pad(domain: [number, number], kind: ScaleKind): [number, number] {
  const [a, b] = domain;
  if (kind === "log") return [a / 1.4, b * 1.4];
  const span = b - a || 1;
  return [a - 0.06 * span, b + 0.06 * span];
}

function renderPanel(panel: Panel, x0: number): string {
  const px: string[] = [];
  const inner: [number, number] = [x0 + MARGIN.left, x0 + W - MARGIN.right];
  const innerY: [number, number] = [H - MARGIN.bottom, MARGIN.top];

  const xs = panel.series.flatMap((s) => s.x);
  const ysAll = panel.series.flatMap((s) =>
    s.yerr ? s.y.flatMap((v, i) => [v - s.yerr![i], v + s.yerr![i]]) : s.y,
  );
  for (const r of panel.refLines) {
    (r.axis === "y" ? ysAll : xs).push(r.value);
  }
  const xScale = makeScale(panel.xScale, pad(finiteExtent(xs, panel.xScale === "log"), panel.xScale), inner);
  const yScale = makeScale(panel.yScale, pad(finiteExtent(ysAll, panel.yScale === "log"), panel.yScale), innerY);

  px.push(
    `<rect x="${inner[0]}" y="${innerY[1]}" width="${inner[1] - inner[0]}" height="${innerY[0] - innerY[1]}" fill="none" stroke="#333"/>`,
  );
  for (const t of ticks(xScale)) {
    const x = fmtCoord(xScale.map(t));
    px.push(`<line x1="${x}" y1="${innerY[0]}" x2="${x}" y2="${innerY[0] + 4}" stroke="#333"/>`);
    px.push(
      `<text x="${x}" y="${innerY[0] + 16}" font-size="10" text-anchor="middle">${fmtTick(t)}</text>`,
    );
  }
  for (const t of ticks(yScale)) {
    const y = fmtCoord(yScale.map(t));
    px.push(`<line x1="${inner[0] - 4}" y1="${y}" x2="${inner[0]}" y2="${y}" stroke="#333"/>`);
    px.push(
      `<text x="${inner[0] - 7}" y="${y}" font-size="10" text-anchor="end" dominant-baseline="middle">${fmtTick(t)}</text>`,
    );
  }
  px.push(
    `<text x="${(inner[0] + inner[1]) / 2}" y="${H - 10}" font-size="12" text-anchor="middle">${panel.xLabel}</text>`,
  );
  px.push(
    `<text x="${x0 + 14}" y="${(innerY[0] + innerY[1]) / 2}" font-size="12" text-anchor="middle" transform="rotate(-90 ${x0 + 14} ${(innerY[0] + innerY[1]) / 2})">${panel.yLabel}</text>`,
  );
  px.push(
    `<text x="${(inner[0] + inner[1]) / 2}" y="${MARGIN.top - 12}" font-size="12" text-anchor="middle" font-weight="bold">${panel.title}</text>`,
  );

  for (const ref of panel.refLines) {
    const c = ref.color ?? "#555";
    const dash = ref.dashed === false ? "" : ' stroke-dasharray="6 4"';
    if (ref.axis === "y") {
      const y = fmtCoord(yScale.map(ref.value));
      px.push(`<line x1="${inner[0]}" y1="${y}" x2="${inner[1]}" y2="${y}" stroke="${c}"${dash}/>`);
      if (ref.label) {
        px.push(
          `<text x="${inner[1] - 4}" y="${Number(y) - 4}" font-size="10" text-anchor="end" fill="${c}">${ref.label}</text>`,
        );
      }
    } else {
      const x = fmtCoord(xScale.map(ref.value));
      px.push(`<line x1="${x}" y1="${innerY[0]}" x2="${x}" y2="${innerY[1]}" stroke="${c}"${dash}/>`);
    }
  }

  panel.series.forEach((s, i) => {
    const c = s.color ?? color(i);
    const pts = s.x
      .map((xv, k) => [xv, s.y[k]] as const)
      .filter(([xv, yv]) => Number.isFinite(xv) && Number.isFinite(yv))
      .filter(([xv, yv]) => (panel.xScale !== "log" || xv > 0) && (panel.yScale !== "log" || yv > 0));
    if (s.mode !== "points" && pts.length > 1) {
      const path = pts
        .map(([xv, yv]) => `${fmtCoord(xScale.map(xv))},${fmtCoord(yScale.map(yv))}`)
        .join(" ");
      const dash = s.dashed ? ' stroke-dasharray="6 4"' : "";
      px.push(`<polyline points="${path}" fill="none" stroke="${c}" stroke-width="1.5"${dash}/>`);
    }
    if (s.mode !== "line") {
      pts.forEach(([xv, yv], k) => {
        const x = fmtCoord(xScale.map(xv));
        const y = fmtCoord(yScale.map(yv));
        px.push(`<circle cx="${x}" cy="${y}" r="3" fill="${c}"/>`);
        const e = s.yerr?.[k];
        if (e && e > 0) {
          const y1 = fmtCoord(yScale.map(yv - e));
          const y2 = fmtCoord(yScale.map(yv + e));
          px.push(`<line x1="${x}" y1="${y1}" x2="${x}" y2="${y2}" stroke="${c}"/>`);
          px.push(`<line x1="${Number(x) - 3}" y1="${y1}" x2="${Number(x) + 3}" y2="${y1}" stroke="${c}"/>`);
          px.push(`<line x1="${Number(x) - 3}" y1="${y2}" x2="${Number(x) + 3}" y2="${y2}" stroke="${c}"/>`);
        }
      });
    }
  });

  // legend
  panel.series.forEach((s, i) => {
    const c = s.color ?? color(i);
    const y = MARGIN.top + 14 * i + 8;
    px.push(`<line x1="${inner[1] - 90}" y1="${y}" x2="${inner[1] - 72}" y2="${y}" stroke="${c}" stroke-width="2"/>`);
    px.push(`<text x="${inner[1] - 68}" y="${y + 3}" font-size="10">${s.label}</text>`);
  });
  return px.join("\n");
}

export function renderFigure(panels: Panel[]): string {
  const width = W * panels.length;
  const body = panels.map((p, i) => renderPanel(p, i * W)).join("\n");
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${H}" viewBox="0 0 ${width} ${H}">`,
    `<rect width="${width}" height="${H}" fill="white"/>`,
    body,
    `</svg>`,
  ].join("\n");
}
