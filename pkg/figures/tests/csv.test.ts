import assert from "node:assert/strict";
import { test } from "node:test";
import { parseCsv, parseCsvRecords, requireNumber } from "../src/csv.js";

test("parses plain rows", () => {
  assert.deepEqual(parseCsv("a,b\n1,2\n3,4\n"), [["a", "b"], ["1", "2"], ["3", "4"]]);
});

test("handles quoted fields with commas and escaped quotes", () => {
  const rows = parseCsv('x,"hello, world","say ""hi"""\n');
  assert.deepEqual(rows, [["x", "hello, world", 'say "hi"']]);
});

test("tolerates CRLF and missing trailing newline", () => {
  assert.deepEqual(parseCsv("a,b\r\n1,2"), [["a", "b"], ["1", "2"]]);
});

test("records keyed by header", () => {
  const records = parseCsvRecords("x1,status\n0.5,ok\n", "test");
  assert.equal(records.length, 1);
  assert.equal(records[0].x1, "0.5");
  assert.equal(records[0].status, "ok");
});

test("field count mismatch is an error", () => {
  assert.throws(() => parseCsvRecords("a,b\n1\n", "ctx"), /ctx: row 2 has 1 fields/);
});

test("requireNumber accepts nan and rejects junk", () => {
  assert.ok(Number.isNaN(requireNumber({ v: "nan" }, "v", "ctx")));
  assert.equal(requireNumber({ v: "2.5" }, "v", "ctx"), 2.5);
  assert.throws(() => requireNumber({ v: "abc" }, "v", "ctx"), /non-numeric/);
  assert.throws(() => requireNumber({}, "v", "ctx"), /missing column/);
});
