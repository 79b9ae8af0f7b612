// Count histogram figure: observed per-batch totals as bars, exact-law
// expectations as an overlaid curve, one panel per walk mode.

import { parseCsv, toNumber, type Table } from "./csv.js";
import { document, fmt, line, polyline, rect, text, tickLabel, ticks } from "./svg.js";

export const HISTOGRAM_COLUMNS = [
  "count",
  "observed_strict",
  "observed_nonstrict",
  "observed_purepoisson",
  "expected_strict",
  "expected_nonstrict",
  "expected_purepoisson",
];

const MODES = ["strict", "nonstrict", "purepoisson"] as const;
const MODE_LABELS: Record<string, string> = {
  strict: "strict",
  nonstrict: "non-strict",
  purepoisson: "pure Poisson",
};

export interface HistogramPanel {
  mode: string;
  counts: number[];          // k values, dense from 0
  observed: number[] | null; // null when the mode was not run
  expected: number[];
  barTotal: number;          // sum of observed frequencies
}

export function histogramData(table: Table, path: string): HistogramPanel[] {
  const panels: HistogramPanel[] = [];
  for (const mode of MODES) {
    const obsCol = HISTOGRAM_COLUMNS.indexOf(`observed_${mode}`);
    const expCol = HISTOGRAM_COLUMNS.indexOf(`expected_${mode}`);
    const counts: number[] = [];
    const observed: number[] = [];
    const expected: number[] = [];
    let haveObserved = false;
    table.rows.forEach((row, i) => {
      const lineNo = i + 2;
      counts.push(toNumber(row[0], path, lineNo, "count"));
      expected.push(toNumber(row[expCol], path, lineNo, HISTOGRAM_COLUMNS[expCol]));
      if (row[obsCol] === "") {
        observed.push(0);
      } else {
        haveObserved = true;
        observed.push(toNumber(row[obsCol], path, lineNo, HISTOGRAM_COLUMNS[obsCol]));
      }
    });
    const barTotal = haveObserved ? observed.reduce((a, b) => a + b, 0) : 0;
    panels.push({
      mode,
      counts,
      observed: haveObserved ? observed : null,
      expected,
      barTotal,
    });
  }
  return panels;
}

// visible k-range: bins carrying observed mass or non-negligible expectation
function panelRange(panel: HistogramPanel): [number, number] {
  const expMax = Math.max(...panel.expected, 0);
  let lo = panel.counts.length - 1;
  let hi = 0;
  for (let i = 0; i < panel.counts.length; i++) {
    const keep =
      (panel.observed !== null && panel.observed[i] > 0) ||
      panel.expected[i] > 1e-3 * expMax;
    if (keep) {
      lo = Math.min(lo, i);
      hi = Math.max(hi, i);
    }
  }
  if (lo > hi) return [0, panel.counts.length - 1];
  return [Math.max(0, lo - 1), Math.min(panel.counts.length - 1, hi + 1)];
}

const WIDTH = 980;
const HEIGHT = 340;
const MARGIN = { top: 34, bottom: 42, left: 52, gap: 26 };
const BAR_FILL = "#9ecae1";
const CURVE_STROKE = "#d62728";
const AXIS = "#333333";

export function buildHistogramSvg(csvText: string, path: string, title?: string): string {
  const table = parseCsv(csvText, path, HISTOGRAM_COLUMNS);
  const panels = histogramData(table, path);

  const panelW = (WIDTH - MARGIN.left * 3 - MARGIN.gap * 2 - 10) / 3;
  const panelH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const body: string[] = [];
  if (title) body.push(text(WIDTH / 2, 18, title, 13, "middle"));

  panels.forEach((panel, pi) => {
    const x0 = MARGIN.left + pi * (panelW + MARGIN.left + MARGIN.gap);
    const y0 = MARGIN.top;
    const [klo, khi] = panelRange(panel);
    const nBins = khi - klo + 1;
    const binW = panelW / nBins;
    const yMax = Math.max(
      ...panel.expected.slice(klo, khi + 1),
      ...(panel.observed ? panel.observed.slice(klo, khi + 1) : [0]),
      1,
    );
    const yScale = (v: number) => y0 + panelH - (v / yMax) * panelH;

    // frame and y ticks
    body.push(line(x0, y0, x0, y0 + panelH, AXIS));
    body.push(line(x0, y0 + panelH, x0 + panelW, y0 + panelH, AXIS));
    for (const tv of ticks(yMax, 4)) {
      const ty = yScale(tv);
      body.push(line(x0 - 3, ty, x0, ty, AXIS));
      body.push(text(x0 - 6, ty + 3.5, tickLabel(tv), 9, "end"));
    }

    if (panel.observed !== null) {
      for (let k = klo; k <= khi; k++) {
        const v = panel.observed[k];
        if (v <= 0) continue;
        const bx = x0 + (k - klo) * binW;
        body.push(rect(bx, yScale(v), Math.max(binW, 0.5), (v / yMax) * panelH, BAR_FILL));
      }
    }

    const pts: Array<[number, number]> = [];
    for (let k = klo; k <= khi; k++) {
      pts.push([x0 + (k - klo + 0.5) * binW, yScale(panel.expected[k])]);
    }
    body.push(polyline(pts, CURVE_STROKE));

    // x ticks: ends plus midpoint
    const xt = [klo, Math.round((klo + khi) / 2), khi];
    for (const k of xt) {
      const tx = x0 + (k - klo + 0.5) * binW;
      body.push(line(tx, y0 + panelH, tx, y0 + panelH + 3, AXIS));
      body.push(text(tx, y0 + panelH + 14, String(k), 9, "middle"));
    }
    body.push(text(x0 + panelW / 2, y0 + panelH + 30, "total count", 10, "middle"));
    body.push(text(x0 + panelW / 2, y0 - 8, MODE_LABELS[panel.mode], 11, "middle"));
  });

  return document(WIDTH, HEIGHT, body);
}
