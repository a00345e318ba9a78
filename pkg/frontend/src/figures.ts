/** Maps simulator CSV tables onto the six figure layouts. */

import { basename } from "path";
import { SchemaError, Table, classify, num, requireColumns } from "./csv";
import { Panel, RefLine, Series } from "./svg";

export const FIGURE_KINDS = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

const LN2 = Math.log(2);

function pick(tables: Table[], kind: string): Table | undefined {
  return tables.find((t) => classify(t) === kind);
}

function pickAll(tables: Table[], kind: string): Table[] {
  return tables.filter((t) => classify(t) === kind);
}

function demand(tables: Table[], kind: string, needed: string[], figure: string): Table {
  const found = pick(tables, kind);
  if (!found) {
    const have = tables.map((t) => `${basename(t.path)} (${classify(t)})`).join(", ") || "none";
    throw new SchemaError(
      `${figure} needs a ${kind} CSV with columns ${needed.join(", ")}; inputs: ${have}`,
    );
  }
  requireColumns(found, needed);
  return found;
}

function seriesLabel(table: Table): string {
  const name = basename(table.path).replace(/\.csv$/, "");
  const m = name.match(/L(\d+)/);
  return m ? `L=${m[1]}` : name;
}

/** Fig 1 style: SRE vs time, one curve per input series file. */
function fig1(tables: Table[]): Panel[] {
  const inputs = pickAll(tables, "series");
  if (inputs.length === 0) {
    demand(tables, "series", ["t", "sre"], "fig1");
  }
  const series: Series[] = inputs.map((t) => ({
    label: seriesLabel(t),
    x: t.rows.map((r) => num(r, "t")),
    y: t.rows.map((r) => num(r, "sre")),
    mode: "line",
  }));
  return [
    {
      title: "entropy vs time",
      xLabel: "t",
      yLabel: "M2(t)",
      xScale: "linear",
      yScale: "linear",
      series,
      refLines: [],
    },
  ];
}

/** Fig 2 style: time-averaged SRE vs L with random baselines and ln(dim). */
function fig2(tables: Table[]): Panel[] {
  const t = demand(tables, "summary", ["L", "model_mean", "model_stderr", "phase_mean", "phase_stderr", "haar_mean", "haar_stderr", "ln_dim"], "fig2");
  const L = t.rows.map((r) => num(r, "L"));
  const mk = (col: string, err: string, label: string, mode: Series["mode"]): Series => ({
    label,
    x: L,
    y: t.rows.map((r) => num(r, col)),
    yerr: t.rows.map((r) => num(r, err)),
    mode,
  });
  return [
    {
      title: "time-averaged entropy vs size",
      xLabel: "L",
      yLabel: "mean M2",
      xScale: "linear",
      yScale: "linear",
      series: [
        mk("model_mean", "model_stderr", "model", "line+points"),
        mk("phase_mean", "phase_stderr", "random phase", "line+points"),
        mk("haar_mean", "haar_stderr", "haar", "line+points"),
        {
          label: "ln dim",
          x: L,
          y: t.rows.map((r) => num(r, "ln_dim")),
          mode: "line",
          color: "#555",
          dashed: true,
        },
      ],
      refLines: [],
    },
  ];
}

function groupBy<T>(rows: T[], key: (row: T) => string): Map<string, T[]> {
  const out = new Map<string, T[]>();
  for (const row of rows) {
    const k = key(row);
    if (!out.has(k)) out.set(k, []);
    out.get(k)!.push(row);
  }
  return out;
}

function lorentzian(g: number, A: number, g0: number, b: number): number {
  return A / (1 + Math.pow(g / g0, b));
}

function logspace(a: number, b: number, n: number): number[] {
  const out: number[] = [];
  for (let i = 0; i < n; i++) {
    out.push(Math.pow(10, Math.log10(a) + (i * (Math.log10(b) - Math.log10(a))) / (n - 1)));
  }
  return out;
}

/** Fig 3 style: steady SRE vs gamma (log x), fit overlays, random-phase
 *  dashed levels. */
function fig3(tables: Table[]): Panel[] {
  const sweep = demand(tables, "sweep", ["model", "L", "gamma", "mean_sre", "stderr"], "fig3");
  const fits = pick(tables, "fits");
  const random = pick(tables, "random");
  const series: Series[] = [];
  const refLines: RefLine[] = [];
  const byL = groupBy(sweep.rows, (r) => r["L"]);
  const sizes = [...byL.keys()].sort((a, b) => Number(a) - Number(b));
  let gammaMin = Infinity;
  let gammaMax = -Infinity;
  sizes.forEach((Lkey, i) => {
    const rows = byL.get(Lkey)!.slice().sort((a, b) => num(a, "gamma") - num(b, "gamma"));
    const x = rows.map((r) => num(r, "gamma"));
    gammaMin = Math.min(gammaMin, ...x);
    gammaMax = Math.max(gammaMax, ...x);
    series.push({
      label: `L=${Lkey}`,
      x,
      y: rows.map((r) => num(r, "mean_sre")),
      yerr: rows.map((r) => num(r, "stderr")),
      mode: "points",
    });
    if (fits) {
      requireColumns(fits, ["L", "A", "gamma0", "b"]);
      const frow = fits.rows.find((r) => r["L"] === Lkey);
      if (frow) {
        const g = logspace(Math.min(...x), Math.max(...x), 120);
        series.push({
          label: `fit L=${Lkey}`,
          x: g,
          y: g.map((v) => lorentzian(v, num(frow, "A"), num(frow, "gamma0"), num(frow, "b"))),
          mode: "line",
          color: undefined,
        });
      }
    }
    if (random) {
      requireColumns(random, ["L", "kind", "mean_sre"]);
      const rrow = random.rows.find((r) => r["L"] === Lkey && r["kind"] === "phase");
      if (rrow) {
        refLines.push({ value: num(rrow, "mean_sre"), axis: "y", dashed: true });
      }
    }
  });
  return [
    {
      title: "steady-state entropy vs coupling",
      xLabel: "gamma",
      yLabel: "mean M2",
      xScale: "log",
      yScale: "linear",
      series,
      refLines,
    },
  ];
}

/** Fig 4 style: fit parameters vs L, one panel per parameter. */
function fig4(tables: Table[]): Panel[] {
  const fitTables = pickAll(tables, "fits");
  if (fitTables.length === 0) {
    demand(tables, "fits", ["L", "A", "A_err", "gamma0", "gamma0_err", "b", "b_err"], "fig4");
  }
  const random = pick(tables, "random");
  const panels: Panel[] = [];
  const paramCols: [string, string, string][] = [
    ["A", "A_err", "plateau A"],
    ["b", "b_err", "steepness b"],
    ["gamma0", "gamma0_err", "decay scale gamma0"],
  ];
  for (const [col, err, title] of paramCols) {
    const series: Series[] = fitTables.map((t) => {
      requireColumns(t, ["L", col, err]);
      const rows = t.rows.slice().sort((a, b) => num(a, "L") - num(b, "L"));
      return {
        label: basename(t.path).replace(/^fits_|\.csv$/g, ""),
        x: rows.map((r) => num(r, "L")),
        y: rows.map((r) => num(r, col)),
        yerr: rows.map((r) => num(r, err)),
        mode: "line+points" as const,
      };
    });
    if (col === "A" && random) {
      const rows = random.rows.filter((r) => r["kind"] === "phase");
      series.push({
        label: "random phase",
        x: rows.map((r) => num(r, "L")),
        y: rows.map((r) => num(r, "mean_sre")),
        mode: "line",
        color: "#555",
        dashed: true,
      });
    }
    panels.push({
      title,
      xLabel: "L",
      yLabel: col,
      xScale: "linear",
      yScale: "linear",
      series,
      refLines: [],
    });
  }
  return panels;
}

/** Fig 5 style: steady SRE vs L, one curve per gamma. */
function fig5(tables: Table[]): Panel[] {
  const sweep = demand(tables, "sweep", ["model", "L", "gamma", "mean_sre", "stderr"], "fig5");
  const byGamma = groupBy(sweep.rows, (r) => r["gamma"]);
  const gammas = [...byGamma.keys()].sort((a, b) => Number(a) - Number(b));
  const series: Series[] = gammas.map((g) => {
    const rows = byGamma.get(g)!.slice().sort((a, b) => num(a, "L") - num(b, "L"));
    return {
      label: `gamma=${Number(g).toPrecision(3)}`,
      x: rows.map((r) => num(r, "L")),
      y: rows.map((r) => num(r, "mean_sre")),
      yerr: rows.map((r) => num(r, "stderr")),
      mode: "line+points",
    };
  });
  return [
    {
      title: "steady-state entropy vs size",
      xLabel: "L",
      yLabel: "mean M2",
      xScale: "linear",
      yScale: "linear",
      series,
      refLines: [],
    },
  ];
}

/** Fig 6 style: slope of entropy vs size, against gamma, with ln 2 level. */
function fig6(tables: Table[]): Panel[] {
  const slopeTables = pickAll(tables, "slopes");
  if (slopeTables.length === 0) {
    demand(tables, "slopes", ["gamma", "slope", "slope_err"], "fig6");
  }
  const series: Series[] = slopeTables.map((t) => {
    const rows = t.rows.slice().sort((a, b) => num(a, "gamma") - num(b, "gamma"));
    return {
      label: basename(t.path).replace(/^slopes_|\.csv$/g, ""),
      x: rows.map((r) => num(r, "gamma")),
      y: rows.map((r) => num(r, "slope")),
      yerr: rows.map((r) => num(r, "slope_err")),
      mode: "line+points" as const,
    };
  });
  return [
    {
      title: "size slope vs coupling",
      xLabel: "gamma",
      yLabel: "slope m",
      xScale: "log",
      yScale: "linear",
      series,
      refLines: [{ value: LN2, axis: "y", label: "ln 2", dashed: true }],
    },
  ];
}

const BUILDERS: Record<FigureKind, (tables: Table[]) => Panel[]> = {
  fig1,
  fig2,
  fig3,
  fig4,
  fig5,
  fig6,
};

export function buildFigure(kind: string, tables: Table[]): Panel[] {
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new SchemaError(`unknown figure kind "${kind}" (expected ${FIGURE_KINDS.join("|")})`);
  }
  return BUILDERS[kind as FigureKind](tables);
}
