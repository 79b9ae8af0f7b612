// Strict CSV reading for the simulation output schemas.
//
// The producing side writes plain comma-separated values with no quoting,
// so parsing is a split; the value of this module is the validation.  A
// file with the wrong header fails with the exact column name, so schema
// drift between the simulator and the plots is caught loudly.

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string, path: string, expected: string[]): Table {
  const lines = text.split("\n");
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) {
    throw new Error(`${path}: empty file`);
  }
  const header = lines[0].split(",");
  if (header.length !== expected.length) {
    throw new Error(
      `${path}: expected ${expected.length} columns (${expected.join(",")}), ` +
      `found ${header.length}`,
    );
  }
  for (let i = 0; i < expected.length; i++) {
    if (header[i] !== expected[i]) {
      throw new Error(
        `${path}: expected column ${i + 1} to be "${expected[i]}", found "${header[i]}"`,
      );
    }
  }
  const rows: string[][] = [];
  for (let ln = 1; ln < lines.length; ln++) {
    const fields = lines[ln].split(",");
    if (fields.length !== expected.length) {
      throw new Error(
        `${path}: line ${ln + 1} has ${fields.length} fields, expected ${expected.length}`,
      );
    }
    rows.push(fields);
  }
  return { header, rows };
}

export function toNumber(field: string, path: string, line: number, column: string): number {
  const v = Number(field);
  if (field === "" || !Number.isFinite(v)) {
    throw new Error(`${path}: line ${line} column "${column}": not a number: "${field}"`);
  }
  return v;
}
