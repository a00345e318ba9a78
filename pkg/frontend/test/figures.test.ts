import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";
import { parseCsv } from "../src/csv";
import { buildFigure } from "../src/figures";
import { render } from "../src/cli";

function table(name: string, text: string) {
  const t = parseCsv(text, name);
  return t;
}

const SERIES = "t,sre\n0,0\n1,0.5\n2,0.8\n";
const SUMMARY =
  "L,model_mean,model_stderr,phase_mean,phase_stderr,haar_mean,haar_stderr,ln_dim\n" +
  "6,1.5,0,2.17,0.01,2.12,0.01,2.996\n8,2.5,0,3.49,0.01,3.45,0.01,4.248\n";
const SWEEP =
  "model,L,gamma,mean_sre,stderr,n_traj,t0,t1,stationary\n" +
  "xxz,6,0.01,2.0,0.05,8,10,20,1\nxxz,6,0.1,1.5,0.05,8,10,20,1\n" +
  "xxz,6,1.0,0.5,0.05,8,10,20,1\nxxz,8,0.01,3.0,0.05,8,10,20,1\n" +
  "xxz,8,0.1,2.2,0.05,8,10,20,1\nxxz,8,1.0,0.8,0.05,8,10,20,1\n";
const FITS =
  "L,A,A_err,gamma0,gamma0_err,b,b_err,residual_rms,converged\n" +
  "6,2.1,0.05,0.2,0.02,1.3,0.05,1.2,1\n8,3.1,0.05,0.2,0.02,1.4,0.05,1.1,1\n";
const RANDOM =
  "L,kind,mean_sre,stderr,n_states,ln_dim\n6,phase,2.17,0.01,50,2.996\n" +
  "6,haar,2.12,0.01,50,2.996\n8,phase,3.49,0.01,50,4.248\n8,haar,3.45,0.01,50,4.248\n";
const SLOPES = "gamma,slope,slope_err,n_sizes\n0.01,0.66,0.02,3\n0.1,0.5,0.02,3\n1,0.2,0.02,3\n";

describe("buildFigure", () => {
  it("fig1 takes one series per input file", () => {
    const panels = buildFigure("fig1", [table("unitary_series_xxz_L6.csv", SERIES)]);
    expect(panels).toHaveLength(1);
    expect(panels[0].series[0].label).toBe("L=6");
    expect(panels[0].series[0].y).toEqual([0, 0.5, 0.8]);
  });

  it("fig2 includes baselines and the ln-dim reference", () => {
    const panels = buildFigure("fig2", [table("unitary_summary_xxz.csv", SUMMARY)]);
    const labels = panels[0].series.map((s) => s.label);
    expect(labels).toEqual(["model", "random phase", "haar", "ln dim"]);
  });

  it("fig3 overlays fit rows verbatim and random-phase levels", () => {
    const panels = buildFigure("fig3", [
      table("sweep_xxz.csv", SWEEP),
      table("fits_xxz.csv", FITS),
      table("random_state.csv", RANDOM),
    ]);
    const p = panels[0];
    expect(p.xScale).toBe("log");
    const fit6 = p.series.find((s) => s.label === "fit L=6")!;
    // overlay evaluates A/(1+(g/g0)^b) from the CSV row: at gamma=g0 it is A/2
    const iMid = fit6.x.findIndex((g) => Math.abs(g - 0.2) < 0.01);
    expect(fit6.y[0]).toBeCloseTo(2.1 / (1 + Math.pow(0.01 / 0.2, 1.3)), 6);
    expect(p.refLines.map((r) => r.value)).toEqual([2.17, 3.49]);
  });

  it("fig4 gives one panel per fit parameter", () => {
    const panels = buildFigure("fig4", [table("fits_xxz.csv", FITS)]);
    expect(panels.map((p) => p.yLabel)).toEqual(["A", "b", "gamma0"]);
    expect(panels[0].series[0].label).toBe("xxz");
  });

  it("fig5 groups by gamma", () => {
    const panels = buildFigure("fig5", [table("sweep_xxz.csv", SWEEP)]);
    expect(panels[0].series.map((s) => s.label)).toEqual([
      "gamma=0.0100",
      "gamma=0.100",
      "gamma=1.00",
    ]);
  });

  it("fig6 draws the ln 2 reference", () => {
    const panels = buildFigure("fig6", [table("slopes_xxz.csv", SLOPES)]);
    expect(panels[0].refLines[0].value).toBeCloseTo(Math.log(2));
  });

  it("names the missing schema on mismatch", () => {
    expect(() => buildFigure("fig3", [table("x.csv", SERIES)])).toThrow(/fig3 needs a sweep CSV/);
    expect(() => buildFigure("fig2", [table("x.csv", SWEEP)])).toThrow(/missing|needs/);
  });

  it("rejects unknown kinds", () => {
    expect(() => buildFigure("fig7", [table("x.csv", SERIES)])).toThrow(/unknown figure kind/);
  });

  it("accepts empty-but-valid inputs", () => {
    const empty = table("sweep_xxz.csv", "model,L,gamma,mean_sre,stderr,n_traj,t0,t1,stationary\n");
    const panels = buildFigure("fig3", [empty]);
    expect(panels[0].series).toHaveLength(0);
  });
});

describe("render (end to end)", () => {
  it("writes an svg from csv files on disk", () => {
    const dir = mkdtempSync(join(tmpdir(), "figtest-"));
    const sweepPath = join(dir, "sweep_xxz.csv");
    writeFileSync(sweepPath, SWEEP);
    const fitsPath = join(dir, "fits_xxz.csv");
    writeFileSync(fitsPath, FITS);
    const out = join(dir, "fig3.svg");
    render("fig3", [sweepPath, fitsPath], out);
    const svg = require("fs").readFileSync(out, "utf-8");
    expect(svg).toContain("<svg");
    expect(svg).toContain("polyline");
  });

  it("renders all six kinds without error", () => {
    const dir = mkdtempSync(join(tmpdir(), "figall-"));
    const files: Record<string, string> = {
      "unitary_series_xxz_L6.csv": SERIES,
      "unitary_summary_xxz.csv": SUMMARY,
      "sweep_xxz.csv": SWEEP,
      "fits_xxz.csv": FITS,
      "random_state.csv": RANDOM,
      "slopes_xxz.csv": SLOPES,
    };
    for (const [name, text] of Object.entries(files)) {
      writeFileSync(join(dir, name), text);
    }
    const inputs: Record<string, string[]> = {
      fig1: ["unitary_series_xxz_L6.csv"],
      fig2: ["unitary_summary_xxz.csv"],
      fig3: ["sweep_xxz.csv", "fits_xxz.csv", "random_state.csv"],
      fig4: ["fits_xxz.csv", "random_state.csv"],
      fig5: ["sweep_xxz.csv"],
      fig6: ["slopes_xxz.csv"],
    };
    for (const [kind, names] of Object.entries(inputs)) {
      const out = join(dir, `${kind}.svg`);
      render(kind, names.map((n) => join(dir, n)), out);
      expect(require("fs").readFileSync(out, "utf-8")).toContain("</svg>");
    }
  });
});
