// Minimal deterministic SVG emission.
//
// Every coordinate goes through fmt() so the byte output of a figure is a
// pure function of its inputs: fixed precision, no locale, no timestamps.

export function fmt(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate: ${x}`);
  const s = x.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function rect(
  x: number, y: number, w: number, h: number, fill: string, extra = "",
): string {
  return `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"${extra}/>`;
}

export function line(
  x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, extra = "",
): string {
  return `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${fmt(width)}"${extra}/>`;
}

export function polyline(points: Array<[number, number]>, stroke: string, width = 1.5): string {
  const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${fmt(width)}"/>`;
}

export function text(
  x: number, y: number, s: string, size = 11, anchor = "middle", extra = "",
): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" font-family="sans-serif" font-size="${size}" text-anchor="${anchor}"${extra}>${esc(s)}</text>`;
}

export function document(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    rect(0, 0, width, height, "#ffffff"),
    ...body,
    "</svg>",
    "",
  ].join("\n");
}

// evenly spaced round-number ticks covering [0, hi]
export function ticks(hi: number, count = 5): number[] {
  if (hi <= 0) return [0];
  const raw = hi / count;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= raw) ?? 10 * mag;
  const out: number[] = [];
  for (let v = 0; v <= hi + 1e-9; v += step) out.push(v);
  return out;
}

export function tickLabel(v: number): string {
  if (v === 0) return "0";
  if (Math.abs(v) >= 1000) return v.toExponential(1);
  if (Math.abs(v) < 0.01) return v.toExponential(1);
  return String(Math.round(v * 10000) / 10000);
}
