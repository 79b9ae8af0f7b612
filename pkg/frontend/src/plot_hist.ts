#!/usr/bin/env node
// plot_hist <histogram.csv> <out.svg> [--title T]

import { readFileSync, writeFileSync } from "node:fs";
import { buildHistogramSvg } from "./histogram.js";

export function main(argv: string[]): number {
  const args = [...argv];
  let title: string | undefined;
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
    console.error("usage: plot_hist <histogram.csv> <out.svg> [--title T]");
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
    writeFileSync(output, buildHistogramSvg(csvText, input, title));
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("plot_hist.js")) {
  process.exit(main(process.argv.slice(2)));
}
