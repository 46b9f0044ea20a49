import fs from "node:fs";
import Papa from "papaparse";

/** Raised when an input file does not carry the columns a figure needs.
 * The message names the file and every missing column. */
export class SchemaError extends Error {
  constructor(
    public readonly file: string,
    public readonly missing: string[],
  ) {
    super(`${file}: missing column(s) ${missing.join(", ")}`);
    this.name = "SchemaError";
  }
}

export type Row = Record<string, string | number>;

/** Parse a CSV with a header row and verify the required columns exist. */
export function readCsv(file: string, required: string[]): Row[] {
  const text = fs.readFileSync(file, "utf8");
  const parsed = Papa.parse<Row>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  const missing = required.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(file, missing);
  }
  return parsed.data;
}

export function writeCsv(file: string, header: string[], rows: (string | number)[][]): void {
  const lines = [header.join(",")];
  for (const row of rows) lines.push(row.join(","));
  fs.writeFileSync(file, lines.join("\n") + "\n");
}
