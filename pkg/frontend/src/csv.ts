/**
 * Parser for the qgallery pattern CSV dialect.
 *
 * Layout: `# key = value` metadata lines, a `v_m_s,<axis>_<unit>,flux`
 * header, then one block of rows per velocity slice. The mandatory
 * metadata keys are `scene_hash`, `axis`, `axis_unit`, and `value_unit`;
 * files missing any of them are refused.
 */

export class CsvFormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "CsvFormatError";
  }
}

export interface Pattern {
  /** All metadata key/value pairs, verbatim. */
  metadata: Record<string, string>;
  sceneHash: string;
  axisName: string;
  axisUnit: string;
  valueUnit: string;
  /** Shared sample axis (one copy; identical for every velocity block). */
  axis: number[];
  /** Velocity of each block, in file order. */
  v: number[];
  /** values[i][j] = flux of velocity block i at axis point j, verbatim. */
  values: number[][];
}

const MANDATORY = ["scene_hash", "axis", "axis_unit", "value_unit"] as const;

export function parsePattern(text: string): Pattern {
  const metadata: Record<string, string> = {};
  const lines = text.split("\n");
  let row = 0;

  for (; row < lines.length; row++) {
    const line = lines[row]!;
    if (!line.startsWith("#")) break;
    const body = line.replace(/^#\s?/, "");
    const sep = body.indexOf(" = ");
    if (sep < 0) {
      throw new CsvFormatError(
        `metadata line ${row + 1} has no '=' separator: ${line}`,
      );
    }
    metadata[body.slice(0, sep)] = body.slice(sep + 3);
  }

  for (const key of MANDATORY) {
    if (!(key in metadata)) {
      throw new CsvFormatError(`missing mandatory metadata key: ${key}`);
    }
  }

  if (row >= lines.length || !lines[row]!.startsWith("v_m_s,")) {
    throw new CsvFormatError("missing column header row after metadata");
  }
  row++;

  const v: number[] = [];
  const axis: number[] = [];
  const values: number[][] = [];
  let blockAxis: number[] = [];
  let blockValues: number[] = [];
  let blockV: number | null = null;
  let firstBlockDone = false;

  const closeBlock = () => {
    if (blockV === null) return;
    if (!firstBlockDone) {
      axis.push(...blockAxis);
      firstBlockDone = true;
    } else if (
      blockAxis.length !== axis.length ||
      blockAxis.some((x, j) => x !== axis[j])
    ) {
      throw new CsvFormatError(
        `velocity blocks have different axes (v = ${blockV})`,
      );
    }
    v.push(blockV);
    values.push(blockValues);
    blockAxis = [];
    blockValues = [];
  };

  for (; row < lines.length; row++) {
    const line = lines[row]!;
    if (line === "") continue;
    const fields = line.split(",");
    if (fields.length !== 3) {
      throw new CsvFormatError(
        `line ${row + 1}: expected 3 fields, got ${fields.length}`,
      );
    }
    const nums = fields.map(Number);
    if (nums.some((x) => Number.isNaN(x))) {
      throw new CsvFormatError(`line ${row + 1}: non-numeric field`);
    }
    const [vi, xi, fi] = nums as [number, number, number];
    if (blockV === null || vi !== blockV) {
      closeBlock();
      blockV = vi;
    }
    blockAxis.push(xi);
    blockValues.push(fi);
  }
  closeBlock();

  if (values.length === 0) {
    throw new CsvFormatError("no data rows");
  }

  return {
    metadata,
    sceneHash: metadata["scene_hash"]!,
    axisName: metadata["axis"]!,
    axisUnit: metadata["axis_unit"]!,
    valueUnit: metadata["value_unit"]!,
    axis,
    v,
    values,
  };
}
