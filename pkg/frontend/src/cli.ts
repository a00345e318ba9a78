#!/usr/bin/env node
/** render --kind figN --in <csv...> --out <svg> */

import { writeFileSync } from "fs";
import { SchemaError, readCsv } from "./csv";
import { buildFigure } from "./figures";
import { renderFigure } from "./svg";

function usage(): never {
  console.error("usage: render --kind fig1..fig6 --in <csv...> --out <image.svg>");
  process.exit(2);
}

export function parseArgs(argv: string[]): { kind: string; inputs: string[]; out: string } {
  if (argv[0] !== "render") usage();
  let kind = "";
  let out = "";
  const inputs: string[] = [];
  let i = 1;
  while (i < argv.length) {
    const arg = argv[i];
    if (arg === "--kind") {
      kind = argv[++i] ?? "";
    } else if (arg === "--out") {
      out = argv[++i] ?? "";
    } else if (arg === "--in") {
      i++;
      while (i < argv.length && !argv[i].startsWith("--")) {
        inputs.push(argv[i]);
        i++;
      }
      continue;
    } else {
      usage();
    }
    i++;
  }
  if (!kind || !out || inputs.length === 0) usage();
  return { kind, inputs, out };
}

export function render(kind: string, inputPaths: string[], outPath: string): void {
  const tables = inputPaths.map(readCsv);
  const panels = buildFigure(kind, tables);
  writeFileSync(outPath, renderFigure(panels), "utf-8");
}

function main(): void {
  const { kind, inputs, out } = parseArgs(process.argv.slice(2));
  try {
    render(kind, inputs, out);
    console.log(`wrote ${out}`);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      process.exit(1);
    }
    throw err;
  }
}

if (require.main === module) {
  main();
}
