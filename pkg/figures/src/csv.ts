/** Minimal CSV reader for the sweep/trajectory file contracts. */

/** Parse CSV text into rows of fields, honoring double-quoted fields. */
export function parseCsv(text: string): string[][] {
  const rows: string[][] = [];
  let row: string[] = [];
  let field = "";
  let inQuotes = false;
  let i = 0;
  const pushField = () => {
    row.push(field);
    field = "";
  };
  const pushRow = () => {
    pushField();
    rows.push(row);
    row = [];
  };
  while (i < text.length) {
    const ch = text[i];
    if (inQuotes) {
      if (ch === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i += 2;
          continue;
        }
        inQuotes = false;
        i += 1;
        continue;
      }
      field += ch;
      i += 1;
      continue;
    }
    if (ch === '"') {
      inQuotes = true;
      i += 1;
    } else if (ch === ",") {
      pushField();
      i += 1;
    } else if (ch === "\n") {
      pushRow();
      i += 1;
    } else if (ch === "\r") {
      i += 1; // tolerate CRLF
    } else {
      field += ch;
      i += 1;
    }
  }
  if (field.length > 0 || row.length > 0) {
    pushRow();
  }
  return rows.filter((r) => !(r.length === 1 && r[0] === ""));
}

/** Parse CSV with a header row into keyed records. */
export function parseCsvRecords(text: string, context: string): Array<Record<string, string>> {
  const rows = parseCsv(text);
  if (rows.length === 0) {
    throw new Error(`${context}: empty CSV`);
  }
  const header = rows[0];
  const records: Array<Record<string, string>> = [];
  for (let r = 1; r < rows.length; r++) {
    if (rows[r].length !== header.length) {
      throw new Error(`${context}: row ${r + 1} has ${rows[r].length} fields, expected ${header.length}`);
    }
    const record: Record<string, string> = {};
    header.forEach((name, c) => {
      record[name] = rows[r][c];
    });
    records.push(record);
  }
  return records;
}

export function requireNumber(record: Record<string, string>, key: string, context: string): number {
  const raw = record[key];
  if (raw === undefined) {
    throw new Error(`${context}: missing column ${key}`);
  }
  const value = Number(raw);
  if (raw.trim() === "" || Number.isNaN(value) && raw.trim().toLowerCase() !== "nan") {
    throw new Error(`${context}: column ${key} holds non-numeric value "${raw}"`);
  }
  return value;
}
