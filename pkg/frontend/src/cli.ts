/**
 * Batch figure renderer for qgallery pattern CSVs.
 *
 * Usage:
 *   qgallery-render --kind heatmap           --input a.csv --out fig.svg
 *   qgallery-render --kind linecut           --input a.csv --out fig.svg [--slice N]
 *   qgallery-render --kind paired-difference --input a.csv --input2 b.csv --out fig.svg
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parsePattern } from "./csv.js";
import {
  Figure,
  PlotKind,
  RenderSpec,
  renderHeatmap,
  renderLinecut,
  renderPairedDifference,
} from "./render.js";

function parseArgs(argv: string[]): RenderSpec {
  const get = (flag: string): string | undefined => {
    const i = argv.indexOf(flag);
    return i >= 0 ? argv[i + 1] : undefined;
  };
  const kind = get("--kind");
  const input = get("--input");
  const output = get("--out");
  if (!kind || !input || !output) {
    throw new Error("required flags: --kind, --input, --out");
  }
  if (!["heatmap", "linecut", "paired-difference"].includes(kind)) {
    throw new Error(`unknown plot kind: ${kind}`);
  }
  const slice = get("--slice");
  return {
    kind: kind as PlotKind,
    input,
    input2: get("--input2"),
    output,
    sliceIndex: slice === undefined ? undefined : Number(slice),
  };
}

export function render(spec: RenderSpec): Figure {
  const pattern = parsePattern(readFileSync(spec.input, "utf-8"));
  switch (spec.kind) {
    case "heatmap":
      return renderHeatmap(pattern);
    case "linecut":
      return renderLinecut(pattern, spec.sliceIndex ?? 0);
    case "paired-difference": {
      if (!spec.input2) {
        throw new Error("paired-difference mode requires --input2");
      }
      const shifted = parsePattern(readFileSync(spec.input2, "utf-8"));
      return renderPairedDifference(pattern, shifted, spec.sliceIndex ?? 0);
    }
  }
}

export function main(argv: string[]): number {
  let spec: RenderSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const figure = render(spec);
    for (const warning of figure.warnings) {
      console.warn(`warning: ${warning}`);
    }
    writeFileSync(spec.output, figure.svg + "\n");
    console.log(spec.output);
    return 0;
  } catch (err) {
    console.error(`render error: ${(err as Error).message}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
