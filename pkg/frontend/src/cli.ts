#!/usr/bin/env node
/**
 * pfio-report --in DIR --out DIR
 *
 * Renders every experiment CSV under --in into deterministic SVG figures
 * (plus PNG for rasters) under --out. Exit 0 when everything rendered,
 * 1 when any file failed (remaining figures are still written), 2 on
 * usage errors.
 */

import * as fs from "node:fs";

import { renderDirectory } from "./report";

function usage(msg: string): number {
  process.stderr.write(`${msg}\nusage: pfio-report --in DIR --out DIR\n`);
  return 2;
}

export function main(argv: string[]): number {
  let inDir: string | undefined;
  let outDir: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]!;
    if (arg === "--in") inDir = argv[++i];
    else if (arg === "--out") outDir = argv[++i];
    else return usage(`unknown argument: ${arg}`);
  }
  if (!inDir || !outDir) return usage("--in and --out are both required");
  if (!fs.existsSync(inDir) || !fs.statSync(inDir).isDirectory()) {
    return usage(`input directory not found: ${inDir}`);
  }
  const result = renderDirectory(inDir, outDir);
  for (const file of result.written) process.stdout.write(`wrote ${file}\n`);
  for (const err of result.errors) process.stderr.write(`error: ${err}\n`);
  if (result.written.length === 0 && result.errors.length === 0) {
    process.stderr.write(`no CSV files under ${inDir}\n`);
  }
  return result.errors.length > 0 ? 1 : 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
