/**
 * Parser for the experiment CSV dialect: UTF-8, comma-separated, '\n' line
 * ends, '.' decimal point, RFC-4180 quoting, and the fixed seven-column
 * header. Cells stay raw strings; any number that ends up printed on a
 * figure must be the verbatim cell, so parsing to float happens only for
 * positioning.
 */

export const COLUMNS = [
  "experiment",
  "params",
  "sweep_var",
  "sweep_value",
  "measured",
  "fitted_slope",
  "residual",
] as const;

export type Column = (typeof COLUMNS)[number];

export type Row = Record<Column, string>;

export class SchemaError extends Error {}

/** Split one CSV record stream into rows of raw fields. */
function splitRecords(text: string): string[][] {
  const records: string[][] = [];
  let field = "";
  let record: string[] = [];
  let quoted = false;
  let i = 0;
  while (i < text.length) {
    const ch = text[i];
    if (quoted) {
      if (ch === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
        i += 1;
        continue;
      }
      field += ch;
      i += 1;
      continue;
    }
    if (ch === '"') {
      quoted = true;
      i += 1;
      continue;
    }
    if (ch === ",") {
      record.push(field);
      field = "";
      i += 1;
      continue;
    }
    if (ch === "\n" || ch === "\r") {
      // tolerate \r\n produced by transfers; the dialect itself writes \n
      if (ch === "\r" && text[i + 1] === "\n") i += 1;
      record.push(field);
      records.push(record);
      field = "";
      record = [];
      i += 1;
      continue;
    }
    field += ch;
    i += 1;
  }
  if (field.length > 0 || record.length > 0) {
    record.push(field);
    records.push(record);
  }
  return records;
}

/** Parse a CSV document; the header must carry every dialect column. */
export function parseCsv(text: string, source: string): Row[] {
  const records = splitRecords(text).filter(
    (r) => !(r.length === 1 && r[0] === ""),
  );
  if (records.length === 0) {
    throw new SchemaError(`${source}: empty file, expected a header row`);
  }
  const header = records[0]!;
  const missing = COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(
      `${source}: missing column${missing.length > 1 ? "s" : ""} ` +
        missing.map((c) => `"${c}"`).join(", "),
    );
  }
  const index = new Map(COLUMNS.map((c) => [c, header.indexOf(c)]));
  const rows: Row[] = [];
  for (let r = 1; r < records.length; r++) {
    const rec = records[r]!;
    if (rec.length !== header.length) {
      throw new SchemaError(
        `${source}: row ${r + 1} has ${rec.length} fields, header has ${header.length}`,
      );
    }
    const row = {} as Row;
    for (const c of COLUMNS) row[c] = rec[index.get(c)!] ?? "";
    rows.push(row);
  }
  return rows;
}

/** Group rows by experiment label, preserving first-appearance order. */
export function groupByExperiment(rows: Row[]): Map<string, Row[]> {
  const groups = new Map<string, Row[]>();
  for (const row of rows) {
    const list = groups.get(row.experiment);
    if (list) list.push(row);
    else groups.set(row.experiment, [row]);
  }
  return groups;
}

/** Numeric view of a cell; NaN for empty or non-numeric cells. */
export function num(cell: string): number {
  if (cell.trim() === "") return NaN;
  const v = Number(cell);
  return Number.isFinite(v) ? v : NaN;
}
