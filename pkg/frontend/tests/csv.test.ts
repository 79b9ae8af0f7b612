import { describe, expect, it } from "vitest";

import { parseCsv, toNumber } from "../src/csv.js";

const COLS = ["a", "b", "c"];

describe("parseCsv", () => {
  it("accepts a conforming file", () => {
    const t = parseCsv("a,b,c\n1,2,3\n4,5,6\n", "f.csv", COLS);
    expect(t.rows).toEqual([["1", "2", "3"], ["4", "5", "6"]]);
  });

  it("names the offending column on header mismatch", () => {
    expect(() => parseCsv("a,x,c\n1,2,3\n", "f.csv", COLS)).toThrow(
      'f.csv: expected column 2 to be "b", found "x"',
    );
  });

  it("reports a wrong column count", () => {
    expect(() => parseCsv("a,b\n1,2\n", "f.csv", COLS)).toThrow(
      "expected 3 columns",
    );
  });

  it("reports the line of a short row", () => {
    expect(() => parseCsv("a,b,c\n1,2,3\n4,5\n", "f.csv", COLS)).toThrow(
      "f.csv: line 3 has 2 fields, expected 3",
    );
  });

  it("rejects an empty file", () => {
    expect(() => parseCsv("", "f.csv", COLS)).toThrow("f.csv: empty file");
  });
});

describe("toNumber", () => {
  it("parses floats", () => {
    expect(toNumber("6.25e-2", "f.csv", 2, "p_hat")).toBeCloseTo(0.0625);
  });

  it("names the column of a bad field", () => {
    expect(() => toNumber("oops", "f.csv", 7, "p_hat")).toThrow(
      'f.csv: line 7 column "p_hat": not a number: "oops"',
    );
  });

  it("rejects empty fields", () => {
    expect(() => toNumber("", "f.csv", 3, "count")).toThrow("not a number");
  });
});
