import { describe, expect, it } from "vitest";
import { SchemaError, classify, parseCsv, requireColumns } from "../src/csv";

describe("parseCsv", () => {
  it("parses header and rows", () => {
    const t = parseCsv("a,b\n1,2\n3,4\n");
    expect(t.columns).toEqual(["a", "b"]);
    expect(t.rows).toHaveLength(2);
    expect(t.rows[1]).toEqual({ a: "3", b: "4" });
  });

  it("accepts a header-only file", () => {
    const t = parseCsv("t,sre\n");
    expect(t.rows).toEqual([]);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("a,b\n1\n")).toThrow(SchemaError);
  });

  it("rejects empty input", () => {
    expect(() => parseCsv("")).toThrow(SchemaError);
  });
});

describe("requireColumns", () => {
  it("names the missing column", () => {
    const t = parseCsv("a,b\n1,2\n", "x.csv");
    expect(() => requireColumns(t, ["a", "mean_sre"])).toThrow(/missing column "mean_sre"/);
  });
});

describe("classify", () => {
  it("recognizes the documented schemas", () => {
    expect(classify(parseCsv("t,sre\n"))).toBe("series");
    expect(
      classify(parseCsv("L,model_mean,model_stderr,phase_mean,phase_stderr,haar_mean,haar_stderr,ln_dim\n")),
    ).toBe("summary");
    expect(classify(parseCsv("model,L,gamma,mean_sre,stderr,n_traj,t0,t1,stationary\n"))).toBe("sweep");
    expect(classify(parseCsv("L,A,A_err,gamma0,gamma0_err,b,b_err,residual_rms,converged\n"))).toBe("fits");
    expect(classify(parseCsv("gamma,slope,slope_err,n_sizes\n"))).toBe("slopes");
    expect(classify(parseCsv("L,kind,mean_sre,stderr,n_states,ln_dim\n"))).toBe("random");
    expect(classify(parseCsv("x,y\n"))).toBe("unknown");
  });
});
