/**
 * The four figure kinds built from experiment CSV rows.
 *
 * Rendering never recomputes a statistic: every number printed on a figure
 * is the verbatim cell from the CSV. Numeric parsing is used only to place
 * marks on the canvas.
 */

import { Row, num } from "./csv";
import {
  Scale,
  circle,
  color,
  document,
  fmt,
  line,
  linearScale,
  polyline,
  rect,
  text,
  ticks,
} from "./svg";

export type FigureKind = "loglog_fit" | "sweep_lines" | "raster" | "net_diagram";

export interface FigureSpec {
  inputs: string[];
  kind: FigureKind;
  xLabel: string;
  yLabel: string;
  /** output path stem; the renderer appends .svg (and .png for rasters) */
  output: string;
}

export class FigureError extends Error {}

const W = 460;
const H = 320;
const M = { left: 64, right: 16, top: 34, bottom: 44 };

function frame(
  xLabel: string,
  yLabel: string,
  title: string,
  xs: Scale,
  ys: Scale,
  xTickLabels?: Map<number, string>,
): string[] {
  const body: string[] = [];
  body.push(text(M.left, 18, title, { "font-size": "13" }));
  body.push(
    line(M.left, H - M.bottom, W - M.right, H - M.bottom, { stroke: "#111" }),
  );
  body.push(line(M.left, M.top, M.left, H - M.bottom, { stroke: "#111" }));
  const xt = xTickLabels
    ? [...xTickLabels.keys()]
    : ticks(xs.domain[0], xs.domain[1]);
  for (const v of xt) {
    const x = xs(v);
    body.push(line(x, H - M.bottom, x, H - M.bottom + 4, { stroke: "#111" }));
    const label = xTickLabels ? xTickLabels.get(v)! : fmt(v);
    body.push(
      text(x, H - M.bottom + 16, label, { "text-anchor": "middle" }),
    );
  }
  for (const v of ticks(ys.domain[0], ys.domain[1])) {
    const y = ys(v);
    body.push(line(M.left - 4, y, M.left, y, { stroke: "#111" }));
    body.push(
      text(M.left - 7, y + 3.5, fmt(v), { "text-anchor": "end" }),
    );
  }
  body.push(
    text((M.left + W - M.right) / 2, H - 10, xLabel, {
      "text-anchor": "middle",
    }),
  );
  body.push(
    text(14, (M.top + H - M.bottom) / 2, yLabel, {
      "text-anchor": "middle",
      transform: `rotate(-90 14 ${fmt((M.top + H - M.bottom) / 2)})`,
    }),
  );
  return body;
}

function pad(lo: number, hi: number): [number, number] {
  if (!(hi > lo)) return [lo - 1, hi + 1];
  const p = (hi - lo) * 0.06;
  return [lo - p, hi + p];
}

/**
 * Log-log decay fit: the sweep coordinate is already logarithmic in these
 * CSVs, the ordinate is plotted as log2(measured). The dashed guide line
 * has the CSV's fitted slope and passes through the data centroid; the
 * annotation quotes the fitted_slope and residual cells verbatim.
 */
export function buildLogLogFit(
  spec: FigureSpec,
  rows: Row[],
  title: string,
): string {
  const pts = rows
    .map((r) => ({ x: num(r.sweep_value), y: Math.log2(num(r.measured)) }))
    .filter((p) => Number.isFinite(p.x) && Number.isFinite(p.y));
  if (pts.length < 2) {
    throw new FigureError(`${title}: a decay fit needs two plottable rows`);
  }
  const [xlo, xhi] = pad(
    Math.min(...pts.map((p) => p.x)),
    Math.max(...pts.map((p) => p.x)),
  );
  const [ylo, yhi] = pad(
    Math.min(...pts.map((p) => p.y)),
    Math.max(...pts.map((p) => p.y)),
  );
  const xs = linearScale(xlo, xhi, M.left, W - M.right);
  const ys = linearScale(ylo, yhi, H - M.bottom, M.top);
  const body = frame(spec.xLabel, spec.yLabel, title, xs, ys);

  const cx = pts.reduce((a, p) => a + p.x, 0) / pts.length;
  const cy = pts.reduce((a, p) => a + p.y, 0) / pts.length;
  const slope = num(rows[0]!.fitted_slope);
  if (Number.isFinite(slope)) {
    const yAt = (x: number) => cy + slope * (x - cx);
    body.push(
      line(xs(xlo), ys(yAt(xlo)), xs(xhi), ys(yAt(xhi)), {
        stroke: "#9ca3af",
        "stroke-dasharray": "5 4",
      }),
    );
  }
  body.push(
    polyline(
      pts.map((p) => [xs(p.x), ys(p.y)] as [number, number]),
      { stroke: color(0), "stroke-width": "1.5" },
    ),
  );
  for (const p of pts) {
    body.push(circle(xs(p.x), ys(p.y), 2.6, { fill: color(0) }));
  }
  const slopeCell = rows[0]!.fitted_slope;
  const residCell = rows[0]!.residual;
  body.push(
    text(W - M.right, M.top - 6, `slope ${slopeCell}  residual ${residCell}`, {
      "text-anchor": "end",
      fill: "#374151",
    }),
  );
  return document(W, H, body);
}

/**
 * One line per experiment group over a shared sweep. Positive data spanning
 * more than two octaves is positioned on a log2 ordinate (the axis label
 * says so); non-numeric sweep values fall back to categorical positions.
 */
export function buildSweepLines(
  spec: FigureSpec,
  groups: Map<string, Row[]>,
  title: string,
): string {
  type Series = { label: string; slope: string; pts: { x: number; y: number }[] };
  const categorical: string[] = [];
  const series: Series[] = [];
  for (const [label, rows] of groups) {
    const usable = rows.filter((r) => Number.isFinite(num(r.measured)));
    if (usable.length === 0) continue;
    const pts = usable.map((r) => {
      let x = num(r.sweep_value);
      if (!Number.isFinite(x)) {
        let idx = categorical.indexOf(r.sweep_value);
        if (idx < 0) {
          categorical.push(r.sweep_value);
          idx = categorical.length - 1;
        }
        x = idx;
      }
      return { x, y: num(r.measured) };
    });
    series.push({ label, slope: usable[0]!.fitted_slope, pts });
  }
  if (series.length === 0) {
    throw new FigureError(`${title}: no plottable rows`);
  }
  const allY = series.flatMap((s) => s.pts.map((p) => p.y));
  const logY = allY.every((y) => y > 0) &&
    Math.max(...allY) / Math.min(...allY) > 4;
  if (logY) {
    for (const s of series) for (const p of s.pts) p.y = Math.log2(p.y);
  }
  const allX = series.flatMap((s) => s.pts.map((p) => p.x));
  const ally = series.flatMap((s) => s.pts.map((p) => p.y));
  const [xlo, xhi] = pad(Math.min(...allX), Math.max(...allX));
  const [ylo, yhi] = pad(Math.min(...ally), Math.max(...ally));
  const xs = linearScale(xlo, xhi, M.left, W - M.right);
  const ys = linearScale(ylo, yhi, H - M.bottom, M.top);
  const xTickLabels =
    categorical.length > 0
      ? new Map(categorical.map((label, i) => [i, label] as [number, string]))
      : undefined;
  const yLabel = logY ? `log2(${spec.yLabel})` : spec.yLabel;
  const body = frame(spec.xLabel, yLabel, title, xs, ys, xTickLabels);

  series.forEach((s, i) => {
    const stroke = color(i);
    if (s.pts.length > 1) {
      body.push(
        polyline(
          s.pts.map((p) => [xs(p.x), ys(p.y)] as [number, number]),
          { stroke, "stroke-width": "1.5" },
        ),
      );
    }
    for (const p of s.pts) body.push(circle(xs(p.x), ys(p.y), 2.6, { fill: stroke }));
    const suffix = s.slope !== "" ? `  slope ${s.slope}` : "";
    body.push(
      text(W - M.right, M.top + 12 + 13 * i, `${s.label}${suffix}`, {
        "text-anchor": "end",
        fill: stroke,
      }),
    );
  });
  return document(W, H, body);
}

export interface RasterData {
  side: number;
  cells: number[];
  annotations: string[];
}

/** Square 0/1 cell raster read row-major from `cell`-indexed rows. */
export function rasterData(cellRows: Row[], annotations: string[]): RasterData {
  const indexed = cellRows.map((r) => ({
    i: num(r.sweep_value),
    v: num(r.measured),
  }));
  if (indexed.some((c) => !Number.isFinite(c.i) || !Number.isFinite(c.v))) {
    throw new FigureError("raster rows must have numeric cell index and value");
  }
  const side = Math.round(Math.sqrt(indexed.length));
  if (side * side !== indexed.length) {
    throw new FigureError(
      `raster expects a square cell count, got ${indexed.length}`,
    );
  }
  const cells = new Array<number>(indexed.length).fill(0);
  for (const c of indexed) cells[c.i] = c.v;
  return { side, cells, annotations };
}

export function buildRaster(spec: FigureSpec, data: RasterData, title: string): string {
  const size = 272;
  const x0 = M.left;
  const y0 = M.top + 6;
  const cell = size / data.side;
  const body: string[] = [];
  body.push(text(x0, 18, title, { "font-size": "13" }));
  body.push(
    rect(x0, y0, size, size, { fill: "#f3f4f6", stroke: "#111" }),
  );
  for (let r = 0; r < data.side; r++) {
    for (let c = 0; c < data.side; c++) {
      if (data.cells[r * data.side + c]) {
        body.push(
          rect(x0 + c * cell, y0 + r * cell, cell, cell, { fill: color(0) }),
        );
      }
    }
  }
  data.annotations.forEach((a, i) => {
    body.push(text(x0 + size + 12, y0 + 12 + 14 * i, a, { fill: "#374151" }));
  });
  body.push(
    text(x0 + size / 2, y0 + size + 18, spec.xLabel, { "text-anchor": "middle" }),
  );
  return document(W, y0 + size + 30, body);
}

interface NetPanel {
  heading: string;
  level: number;
  annotations: string[];
}

/**
 * Schematic cap partition of the circle at each dyadic level: cap width
 * 2^{-level/2} radians, so the spoke count doubles every two levels. The
 * measured partition, spacing and covering figures are quoted verbatim.
 */
export function buildNetDiagram(
  spec: FigureSpec,
  groups: Map<string, Row[]>,
  title: string,
): string {
  // rows arrive as <check>[dim=d] with sweep_var = level
  const byPanel = new Map<string, NetPanel>();
  for (const [label, rows] of groups) {
    const match = label.match(/^([a-z_]+)\[dim=(\d+)\]$/);
    if (!match) continue;
    const check = match[1]!;
    for (const row of rows) {
      const level = num(row.sweep_value);
      if (!Number.isFinite(level)) continue;
      const key = `dim=${match[2]} s=${row.sweep_value}`;
      let panel = byPanel.get(key);
      if (!panel) {
        panel = { heading: key, level, annotations: [] };
        byPanel.set(key, panel);
      }
      panel.annotations.push(`${check} ${row.measured}`);
    }
  }
  const panels = [...byPanel.values()];
  if (panels.length === 0) {
    throw new FigureError(`${title}: no net rows of the form check[dim=d]`);
  }
  const pw = 160;
  const ph = 210;
  const cols = Math.min(4, panels.length);
  const rowsN = Math.ceil(panels.length / cols);
  const width = 20 + cols * pw;
  const height = 40 + rowsN * ph;
  const body: string[] = [];
  body.push(text(16, 20, title, { "font-size": "13" }));
  panels.forEach((panel, i) => {
    const px = 20 + (i % cols) * pw;
    const py = 40 + Math.floor(i / cols) * ph;
    const cx = px + pw / 2 - 10;
    const cy = py + 64;
    const r = 48;
    body.push(text(px, py + 4, panel.heading));
    body.push(circle(cx, cy, r, { fill: "none", stroke: "#111" }));
    const width_rad = Math.pow(2, -panel.level / 2);
    const caps = Math.max(1, Math.floor((2 * Math.PI) / width_rad));
    for (let k = 0; k < caps; k++) {
      const a = k * width_rad;
      const x1 = cx + r * Math.cos(a);
      const y1 = cy - r * Math.sin(a);
      body.push(
        line(x1, y1, cx + (r - 7) * Math.cos(a), cy - (r - 7) * Math.sin(a), {
          stroke: color(0),
        }),
      );
    }
    panel.annotations.forEach((a, k) => {
      body.push(
        text(px, cy + r + 20 + 13 * k, a, { fill: "#374151", "font-size": "10" }),
      );
    });
  });
  return document(width, height, body);
}
