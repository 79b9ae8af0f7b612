// End-to-end check over the exact artifacts the simulator's experiment
// runner produced for the diffusion study: both figure commands succeed,
// and rendering is deterministic at the file level.

import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, describe, expect, it } from "vitest";

import { main as plotBox } from "../src/plot_box.js";
import { main as plotHist } from "../src/plot_hist.js";

const FIXTURES = join(__dirname, "fixtures");
const workDir = mkdtempSync(join(tmpdir(), "plots-"));

afterAll(() => rmSync(workDir, { recursive: true, force: true }));

describe("plot_hist", () => {
  it("renders the diffusion histogram deterministically", () => {
    const outA = join(workDir, "hist_a.svg");
    const outB = join(workDir, "hist_b.svg");
    expect(plotHist([join(FIXTURES, "histogram.csv"), outA])).toBe(0);
    expect(plotHist([join(FIXTURES, "histogram.csv"), outB])).toBe(0);
    const a = readFileSync(outA);
    expect(a.length).toBeGreaterThan(1000);
    expect(a.equals(readFileSync(outB))).toBe(true);
  });

  it("fails with usage on wrong arguments", () => {
    expect(plotHist([])).toBe(2);
  });

  it("fails cleanly on a missing file", () => {
    expect(plotHist([join(FIXTURES, "nope.csv"), join(workDir, "x.svg")])).toBe(1);
  });
});

describe("plot_box", () => {
  it("renders the estimator boxplot with a reference line, deterministically", () => {
    const outA = join(workDir, "box_a.svg");
    const outB = join(workDir, "box_b.svg");
    const args = [join(FIXTURES, "rows.csv"), outA, "--ref", "0.068"];
    expect(plotBox(args)).toBe(0);
    expect(plotBox([join(FIXTURES, "rows.csv"), outB, "--ref", "0.068"])).toBe(0);
    const a = readFileSync(outA, "utf8");
    expect(a).toContain('class="reference"');
    expect(a).toBe(readFileSync(outB, "utf8"));
  });

  it("rejects a non-numeric reference", () => {
    expect(plotBox([join(FIXTURES, "rows.csv"), join(workDir, "x.svg"), "--ref", "p"]))
      .toBe(2);
  });

  it("fails with the column name when fed the wrong CSV", () => {
    const out = join(workDir, "x.svg");
    expect(plotBox([join(FIXTURES, "histogram.csv"), out])).toBe(1);
  });
});
