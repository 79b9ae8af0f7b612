#!/usr/bin/env node
// plot_box <rows.csv> <out.svg> [--ref P] [--title T]

import { readFileSync, writeFileSync } from "node:fs";
import { buildBoxplotSvg } from "./boxplot.js";

export function main(argv: string[]): number {
  const args = [...argv];
  let ref: number | undefined;
  let title: string | undefined;

  const ri = args.indexOf("--ref");
  if (ri !== -1) {
    const raw = args[ri + 1];
    ref = raw === undefined ? NaN : Number(raw);
    if (!Number.isFinite(ref)) {
      console.error(`--ref needs a finite number, got "${raw}"`);
      return 2;
    }
    args.splice(ri, 2);
  }
  const ti = args.indexOf("--title");
  if (ti !== -1) {
    title = args[ti + 1];
    if (title === undefined) {
      console.error("--title needs a value");
      return 2;
    }
    args.splice(ti, 2);
  }
  if (args.length !== 2) {
    console.error("usage: plot_box <rows.csv> <out.svg> [--ref P] [--title T]");
    return 2;
  }
  const [input, output] = args;
  let csvText: string;
  try {
    csvText = readFileSync(input, "utf8");
  } catch (err) {
    console.error(`cannot read ${input}: ${(err as Error).message}`);
    return 1;
  }
  try {
    writeFileSync(output, buildBoxplotSvg(csvText, input, ref, title));
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("plot_box.js")) {
  process.exit(main(process.argv.slice(2)));
}
