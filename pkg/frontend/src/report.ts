/**
 * Directory renderer: every CSV in the input directory becomes one or more
 * figures, chosen by the experiment labels inside it.
 *
 *   - groups named roi_raster            -> raster (SVG + PNG)
 *   - sphere_partition / net_* groups    -> one net diagram per CSV
 *   - decay groups carrying a slope fit  -> one log-log fit per group
 *   - everything else                    -> one sweep-lines figure per CSV
 *
 * Output names derive from the CSV stem and group label only, so a rerun
 * over the same directory rewrites exactly the same files.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { Row, SchemaError, groupByExperiment, parseCsv } from "./csv";
import {
  FigureError,
  FigureSpec,
  buildLogLogFit,
  buildNetDiagram,
  buildRaster,
  buildSweepLines,
  rasterData,
} from "./figures";
import { cellsToPng } from "./png";

const LOGLOG_PREFIXES = [
  "kernel_mass",
  "kernel_tail",
  "kernel_mode_decay",
  "omega_sharp",
  "omega_flat",
  "multiplier_kernel",
];

const NET_PREFIXES = ["sphere_partition", "net_spacing", "net_covering"];

function stemOf(file: string): string {
  return path.basename(file).replace(/\.csv$/i, "");
}

function slug(label: string): string {
  return label
    .toLowerCase()
    .replace(/[^a-z0-9]+/g, "_")
    .replace(/^_+|_+$/g, "");
}

function hasPrefix(label: string, prefixes: string[]): boolean {
  return prefixes.some((p) => label === p || label.startsWith(p + "["));
}

export interface RenderedFigure {
  spec: FigureSpec;
  svg: string;
  png?: Buffer;
}

/** Plan and build all figures for one parsed CSV. */
export function figuresForCsv(file: string, rows: Row[]): RenderedFigure[] {
  const stem = stemOf(file);
  const groups = groupByExperiment(rows);
  const out: RenderedFigure[] = [];

  const rasterRows = groups.get("roi_raster");
  if (rasterRows) {
    const annotations: string[] = [];
    for (const [label, rs] of groups) {
      if (label === "roi_raster") continue;
      for (const r of rs) {
        annotations.push(`${label} (${r.sweep_var} ${r.sweep_value}): ${r.measured}`);
      }
    }
    const spec: FigureSpec = {
      inputs: [file],
      kind: "raster",
      xLabel: "influence region cells",
      yLabel: "",
      output: `${stem}__raster`,
    };
    const data = rasterData(rasterRows, annotations);
    out.push({
      spec,
      svg: buildRaster(spec, data, stem),
      png: cellsToPng(data.side, data.cells),
    });
    return out;
  }

  if ([...groups.keys()].some((g) => hasPrefix(g, NET_PREFIXES))) {
    const spec: FigureSpec = {
      inputs: [file],
      kind: "net_diagram",
      xLabel: "",
      yLabel: "",
      output: `${stem}__net_diagram`,
    };
    out.push({ spec, svg: buildNetDiagram(spec, groups, stem) });
    return out;
  }

  const sweepGroups = new Map<string, Row[]>();
  for (const [label, rs] of groups) {
    const plottable = rs.filter((r) => r.measured !== "");
    if (
      hasPrefix(label, LOGLOG_PREFIXES) &&
      plottable.length >= 2 &&
      plottable[0]!.fitted_slope !== ""
    ) {
      const spec: FigureSpec = {
        inputs: [file],
        kind: "loglog_fit",
        xLabel: plottable[0]!.sweep_var,
        yLabel: "log2(measured)",
        output: `${stem}__${slug(label)}`,
      };
      out.push({ spec, svg: buildLogLogFit(spec, plottable, label) });
    } else if (plottable.length > 0) {
      sweepGroups.set(label, plottable);
    }
  }
  if (sweepGroups.size > 0) {
    const first = [...sweepGroups.values()][0]![0]!;
    const spec: FigureSpec = {
      inputs: [file],
      kind: "sweep_lines",
      xLabel: first.sweep_var,
      yLabel: "measured",
      output: `${stem}__sweep_lines`,
    };
    out.push({ spec, svg: buildSweepLines(spec, sweepGroups, stem) });
  }
  return out;
}

export interface RunResult {
  written: string[];
  errors: string[];
}

/** Render every CSV under inDir into outDir; collects per-file errors. */
export function renderDirectory(inDir: string, outDir: string): RunResult {
  const files = fs
    .readdirSync(inDir)
    .filter((f) => f.toLowerCase().endsWith(".csv"))
    .sort();
  const written: string[] = [];
  const errors: string[] = [];
  fs.mkdirSync(outDir, { recursive: true });
  for (const file of files) {
    const full = path.join(inDir, file);
    try {
      const rows = parseCsv(fs.readFileSync(full, "utf-8"), file);
      for (const fig of figuresForCsv(file, rows)) {
        const svgPath = path.join(outDir, `${fig.spec.output}.svg`);
        fs.writeFileSync(svgPath, fig.svg, "utf-8");
        written.push(svgPath);
        if (fig.png) {
          const pngPath = path.join(outDir, `${fig.spec.output}.png`);
          fs.writeFileSync(pngPath, fig.png);
          written.push(pngPath);
        }
      }
    } catch (err) {
      if (err instanceof SchemaError) {
        errors.push(err.message); // already prefixed with the source file
      } else if (err instanceof FigureError) {
        errors.push(`${file}: ${err.message}`);
      } else {
        throw err;
      }
    }
  }
  return { written, errors };
}
