/** Strict reader for the simulator's CSV outputs: one header row, comma
 *  separated, no quoting. */

import { readFileSync } from "fs";

export interface Table {
  path: string;
  columns: string[];
  rows: Record<string, string>[];
}

export class SchemaError extends Error {}

export function parseCsv(text: string, path = "<string>"): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${path}: empty file, expected a header row`);
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `${path}: row ${i + 2} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    const row: Record<string, string> = {};
    columns.forEach((col, j) => (row[col] = cells[j].trim()));
    return row;
  });
  return { path, columns, rows };
}

export function readCsv(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new SchemaError(`cannot read ${path}: ${(err as Error).message}`);
  }
  return parseCsv(text, path);
}

export function requireColumns(table: Table, needed: string[]): void {
  for (const col of needed) {
    if (!table.columns.includes(col)) {
      throw new SchemaError(
        `${table.path}: missing column "${col}" (found: ${table.columns.join(", ")})`,
      );
    }
  }
}

export function num(row: Record<string, string>, col: string): number {
  const v = Number(row[col]);
  if (Number.isNaN(v)) {
    throw new SchemaError(`column "${col}" has non-numeric value "${row[col]}"`);
  }
  return v;
}

/** Matches a table against known schemas by its required columns. */
export function classify(table: Table): string {
  const has = (cols: string[]) => cols.every((c) => table.columns.includes(c));
  if (has(["t", "sre"])) return "series";
  if (has(["L", "model_mean", "phase_mean", "haar_mean", "ln_dim"])) return "summary";
  if (has(["model", "L", "gamma", "mean_sre", "stderr"])) return "sweep";
  if (has(["L", "A", "gamma0", "b"])) return "fits";
  if (has(["gamma", "slope", "slope_err"])) return "slopes";
  if (has(["L", "kind", "mean_sre", "stderr"])) return "random";
  return "unknown";
}
