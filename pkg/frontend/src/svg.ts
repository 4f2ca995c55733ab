/**
 * Deterministic SVG assembly. Documents are plain strings with a fixed
 * attribute order and a fixed number format, so the same inputs always
 * produce the same bytes; nothing here reads the clock or the locale.
 */

export function fmt(v: number): string {
  // two decimals, trailing zeros trimmed; -0 normalized
  const r = Math.round(v * 100) / 100;
  return (Object.is(r, -0) ? 0 : r).toString();
}

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function tag(
  name: string,
  attrs: Record<string, string | number>,
  body?: string,
): string {
  const parts = Object.entries(attrs).map(
    ([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : esc(v)}"`,
  );
  const open = parts.length > 0 ? `<${name} ${parts.join(" ")}` : `<${name}`;
  return body === undefined ? `${open}/>` : `${open}>${body}</${name}>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  attrs: Record<string, string | number> = {},
): string {
  return tag("text", { x: fmt(x), y: fmt(y), ...attrs }, esc(content));
}

export function line(
  x1: number,
  y1: number,
  x2: number,
  y2: number,
  attrs: Record<string, string | number> = {},
): string {
  return tag("line", { x1: fmt(x1), y1: fmt(y1), x2: fmt(x2), y2: fmt(y2), ...attrs });
}

export function polyline(
  points: Array<[number, number]>,
  attrs: Record<string, string | number> = {},
): string {
  const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return tag("polyline", { points: pts, fill: "none", ...attrs });
}

export function circle(
  cx: number,
  cy: number,
  r: number,
  attrs: Record<string, string | number> = {},
): string {
  return tag("circle", { cx: fmt(cx), cy: fmt(cy), r: fmt(r), ...attrs });
}

export function rect(
  x: number,
  y: number,
  w: number,
  h: number,
  attrs: Record<string, string | number> = {},
): string {
  return tag("rect", { x: fmt(x), y: fmt(y), width: fmt(w), height: fmt(h), ...attrs });
}

export function document(width: number, height: number, body: string[]): string {
  const head =
    `<svg xmlns="http://www.w3.org/2000/svg" width="${fmt(width)}" ` +
    `height="${fmt(height)}" viewBox="0 0 ${fmt(width)} ${fmt(height)}" ` +
    `font-family="monospace" font-size="11">`;
  return [head, ...body, "</svg>", ""].join("\n");
}

export const PALETTE = [
  "#2563eb",
  "#dc2626",
  "#059669",
  "#d97706",
  "#7c3aed",
  "#0d9488",
  "#db2777",
  "#525252",
] as const;

export function color(i: number): string {
  return PALETTE[i % PALETTE.length]!;
}

export interface Scale {
  (v: number): number;
  domain: [number, number];
}

/** Affine map [lo, hi] -> [a, b]; degenerate domains pin to the middle. */
export function linearScale(lo: number, hi: number, a: number, b: number): Scale {
  const span = hi - lo;
  const f = (v: number) =>
    span === 0 ? (a + b) / 2 : a + ((v - lo) / span) * (b - a);
  const s = f as Scale;
  s.domain = [lo, hi];
  return s;
}

/** 5-ish round tick positions covering [lo, hi]. */
export function ticks(lo: number, hi: number): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / 4;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = [1, 2, 2.5, 5, 10].map((m) => m * mag).find((s) => s >= rawStep)!;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Math.round(v / step) * step);
  }
  return out;
}
