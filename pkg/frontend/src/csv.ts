/**
 * Reader for the kerrcat CSV dialect:
 *
 *   # kerrcat <version> config=<16 hex>
 *   col_a,col_b,...
 *   1.5,-0.25,...
 *
 * One comment header carrying provenance, one column line, then plain
 * numeric rows. Anything else is a malformed file, not a dialect to
 * sniff around.
 */

import { readFile } from "node:fs/promises";

export interface DataTable {
  version: string;
  configHash: string;
  columns: string[];
  rows: number[][];
}

const HEADER = /^# kerrcat (\S+) config=([0-9a-f]{16})$/;

export class CsvError extends Error {}

export function parseTable(text: string, source = "<string>"): DataTable {
  const lines = text.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length < 2) {
    throw new CsvError(`${source}: expected a provenance header and a column line`);
  }
  const head = HEADER.exec(lines[0]!);
  if (!head) {
    throw new CsvError(`${source}: bad provenance header: ${JSON.stringify(lines[0])}`);
  }
  const columns = lines[1]!.split(",");
  const rows: number[][] = [];
  for (let i = 2; i < lines.length; i++) {
    const parts = lines[i]!.split(",");
    if (parts.length !== columns.length) {
      throw new CsvError(
        `${source}:${i + 1}: expected ${columns.length} fields, got ${parts.length}`,
      );
    }
    const row = parts.map(Number);
    const bad = row.findIndex((v) => Number.isNaN(v));
    if (bad >= 0) {
      throw new CsvError(
        `${source}:${i + 1}: field ${columns[bad]} is not a number: ${JSON.stringify(parts[bad])}`,
      );
    }
    rows.push(row);
  }
  return { version: head[1]!, configHash: head[2]!, columns, rows };
}

export async function readTable(path: string): Promise<DataTable> {
  return parseTable(await readFile(path, "utf-8"), path);
}

/** One column as a flat array; unknown names are a caller bug. */
export function column(table: DataTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new CsvError(`no column ${JSON.stringify(name)} in [${table.columns.join(", ")}]`);
  }
  return table.rows.map((r) => r[idx]!);
}

/** Sorted distinct values of a column, for reassembling grid axes. */
export function distinct(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}
