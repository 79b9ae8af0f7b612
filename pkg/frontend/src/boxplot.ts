// Estimator boxplot figure: one box per estimator found in rows.csv,
// whiskers to the extreme values, optional horizontal reference line.

import { parseCsv, toNumber } from "./csv.js";
import { document, fmt, line, rect, text, tickLabel } from "./svg.js";

export const ROWS_COLUMNS = [
  "replication",
  "estimator",
  "p_hat",
  "total_count",
  "pure_poisson_count",
  "conditional_draws",
  "wall_ms",
];

export interface BoxStats {
  estimator: string;
  n: number;
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
}

// linear-interpolation quantile on a sorted copy
function quantile(sorted: number[], q: number): number {
  const pos = (sorted.length - 1) * q;
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  if (lo === hi) return sorted[lo];
  return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
}

export function boxStats(estimator: string, values: number[]): BoxStats {
  const sorted = [...values].sort((a, b) => a - b);
  return {
    estimator,
    n: sorted.length,
    min: sorted[0],
    q1: quantile(sorted, 0.25),
    median: quantile(sorted, 0.5),
    q3: quantile(sorted, 0.75),
    max: sorted[sorted.length - 1],
  };
}

export function collectBoxes(csvText: string, path: string): BoxStats[] {
  const table = parseCsv(csvText, path, ROWS_COLUMNS);
  const groups = new Map<string, number[]>(); // insertion order = first appearance
  table.rows.forEach((row, i) => {
    const est = row[1];
    const p = toNumber(row[2], path, i + 2, "p_hat");
    const group = groups.get(est);
    if (group === undefined) groups.set(est, [p]);
    else group.push(p);
  });
  if (groups.size === 0) throw new Error(`${path}: no data rows`);
  return [...groups.entries()].map(([est, vals]) => boxStats(est, vals));
}

const WIDTH = 560;
const HEIGHT = 380;
const MARGIN = { top: 34, bottom: 48, left: 64, right: 18 };
const BOX_FILL = "#c6dbef";
const BOX_STROKE = "#2b5d8a";
const MEDIAN_STROKE = "#d62728";
const REF_STROKE = "#2ca02c";
const AXIS = "#333333";

export function buildBoxplotSvg(
  csvText: string, path: string, ref?: number, title?: string,
): string {
  const boxes = collectBoxes(csvText, path);

  let lo = Math.min(...boxes.map((b) => b.min));
  let hi = Math.max(...boxes.map((b) => b.max));
  if (ref !== undefined) {
    lo = Math.min(lo, ref);
    hi = Math.max(hi, ref);
  }
  if (hi === lo) {          // degenerate single-value data: open a window
    const pad = hi === 0 ? 1 : Math.abs(hi) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const span = hi - lo;
  lo -= 0.06 * span;
  hi += 0.06 * span;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const yScale = (v: number) => MARGIN.top + plotH - ((v - lo) / (hi - lo)) * plotH;

  const body: string[] = [];
  if (title) body.push(text(WIDTH / 2, 18, title, 13, "middle"));
  body.push(line(MARGIN.left, MARGIN.top, MARGIN.left, MARGIN.top + plotH, AXIS));
  body.push(line(
    MARGIN.left, MARGIN.top + plotH, MARGIN.left + plotW, MARGIN.top + plotH, AXIS,
  ));

  // y ticks at 5 even positions of the value range
  for (let i = 0; i <= 4; i++) {
    const v = lo + ((hi - lo) * i) / 4;
    const ty = yScale(v);
    body.push(line(MARGIN.left - 3, ty, MARGIN.left, ty, AXIS));
    body.push(text(MARGIN.left - 6, ty + 3.5, tickLabel(v), 9, "end"));
  }

  const slot = plotW / boxes.length;
  const boxW = Math.min(slot * 0.46, 70);
  boxes.forEach((b, i) => {
    const cx = MARGIN.left + slot * (i + 0.5);
    const yq1 = yScale(b.q1);
    const yq3 = yScale(b.q3);
    const capW = boxW * 0.6;
    // whiskers to the extremes
    body.push(line(cx, yScale(b.min), cx, yq1, BOX_STROKE));
    body.push(line(cx, yq3, cx, yScale(b.max), BOX_STROKE));
    body.push(line(cx - capW / 2, yScale(b.min), cx + capW / 2, yScale(b.min), BOX_STROKE));
    body.push(line(cx - capW / 2, yScale(b.max), cx + capW / 2, yScale(b.max), BOX_STROKE));
    // interquartile box (may be zero-height when all values coincide)
    body.push(rect(
      cx - boxW / 2, yq3, boxW, Math.max(yq1 - yq3, 0.5), BOX_FILL,
      ` stroke="${BOX_STROKE}" stroke-width="1.00"`,
    ));
    body.push(line(cx - boxW / 2, yScale(b.median), cx + boxW / 2, yScale(b.median), MEDIAN_STROKE, 1.5));
    body.push(text(cx, MARGIN.top + plotH + 16, b.estimator, 10, "middle"));
    body.push(text(cx, MARGIN.top + plotH + 30, `n=${b.n}`, 9, "middle"));
  });

  if (ref !== undefined) {
    const ry = yScale(ref);
    body.push(line(
      MARGIN.left, ry, MARGIN.left + plotW, ry, REF_STROKE, 1.2,
      ' stroke-dasharray="5,3" class="reference"',
    ));
    body.push(text(
      MARGIN.left + plotW - 2, ry - 4, `reference ${tickLabel(ref)}`, 9, "end",
    ));
  }

  return document(WIDTH, HEIGHT, body);
}
