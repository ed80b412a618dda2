/**
 * Deterministic SVG rendering of pattern CSVs.
 *
 * No physics and no smoothing: every figure carries the parsed arrays
 * verbatim in its `data` field, and the SVG is a pure function of the
 * input (fixed canvas, fixed number formatting, color bounds from the
 * data printed into the figure).
 */

import { Pattern } from "./csv.js";

export type PlotKind = "heatmap" | "linecut" | "paired-difference";

export interface RenderSpec {
  kind: PlotKind;
  input: string;
  /** Second CSV (shifted scene) for paired-difference mode. */
  input2?: string;
  output: string;
  /** Velocity block for linecut mode (default 0). */
  sliceIndex?: number;
}

export interface Figure {
  svg: string;
  /** The rendered data arrays, exactly as parsed from the CSV. */
  data: number[][];
  warnings: string[];
}

const WIDTH = 800;
const HEIGHT = 500;
const MARGIN = { left: 70, right: 20, top: 30, bottom: 50 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const fmt = (x: number): string => x.toFixed(3);
const fmtSci = (x: number): string => x.toExponential(6);

function isBlank(values: number[][]): boolean {
  return values.every((row) => row.every((x) => x === 0));
}

function extent(xs: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const x of xs) {
    if (x < lo) lo = x;
    if (x > hi) hi = x;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

/** Blue-to-yellow ramp; t in [0, 1]. */
function color(t: number): string {
  const clamped = Math.min(1, Math.max(0, t));
  const r = Math.round(253 * clamped + 33 * (1 - clamped));
  const g = Math.round(231 * clamped + 20 * (1 - clamped));
  const b = Math.round(37 * clamped + 84 * (1 - clamped));
  return `rgb(${r},${g},${b})`;
}

function header(title: string): string[] {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">${title}</text>`,
  ];
}

function axes(xLabel: string, yLabel: string): string[] {
  return [
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${PLOT_W}" height="${PLOT_H}" fill="none" stroke="black"/>`,
    `<text x="${MARGIN.left + PLOT_W / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-family="sans-serif" font-size="12">${xLabel}</text>`,
    `<text x="18" y="${MARGIN.top + PLOT_H / 2}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 18 ${MARGIN.top + PLOT_H / 2})">${yLabel}</text>`,
  ];
}

function blankFigure(pattern: Pattern, title: string): Figure {
  const parts = header(title).concat(
    axes(
      `${pattern.axisName} [${pattern.axisUnit}]`,
      `flux [${pattern.valueUnit}]`,
    ),
  );
  parts.push("</svg>");
  return {
    svg: parts.join("\n"),
    data: pattern.values,
    warnings: ["empty flux: rendered blank axes"],
  };
}

export function renderHeatmap(pattern: Pattern): Figure {
  const title = `heatmap scene ${pattern.sceneHash.slice(0, 12)}`;
  if (isBlank(pattern.values)) return blankFigure(pattern, title);

  const [xLo, xHi] = extent(pattern.axis);
  let fHi = -Infinity;
  for (const row of pattern.values) for (const f of row) fHi = Math.max(fHi, f);

  const nV = pattern.v.length;
  const cellH = PLOT_H / nV;
  const parts = header(title);
  parts.push(`<!-- color scale: 0 to ${fmtSci(fHi)} ${pattern.valueUnit} -->`);
  for (let i = 0; i < nV; i++) {
    const row = pattern.values[i]!;
    const y = MARGIN.top + i * cellH;
    for (let j = 0; j < pattern.axis.length; j++) {
      const x0 =
        MARGIN.left + ((pattern.axis[j]! - xLo) / (xHi - xLo)) * PLOT_W;
      const w = PLOT_W / pattern.axis.length + 0.5;
      parts.push(
        `<rect x="${fmt(x0)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(cellH)}" fill="${color(row[j]! / fHi)}"/>`,
      );
    }
  }
  parts.push(
    ...axes(
      `${pattern.axisName} [${pattern.axisUnit}]`,
      `v [${pattern.metadata["v_unit"] ?? "m/s"}]`,
    ),
  );
  parts.push("</svg>");
  return { svg: parts.join("\n"), data: pattern.values, warnings: [] };
}

function polyline(
  axis: number[],
  row: number[],
  xLo: number,
  xHi: number,
  fLo: number,
  fHi: number,
  stroke: string,
): string {
  const pts = axis
    .map((x, j) => {
      const px = MARGIN.left + ((x - xLo) / (xHi - xLo)) * PLOT_W;
      const py =
        MARGIN.top + PLOT_H - ((row[j]! - fLo) / (fHi - fLo)) * PLOT_H;
      return `${fmt(px)},${fmt(py)}`;
    })
    .join(" ");
  return `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="1"/>`;
}

export function renderLinecut(pattern: Pattern, sliceIndex = 0): Figure {
  if (sliceIndex < 0 || sliceIndex >= pattern.v.length) {
    throw new RangeError(
      `slice index ${sliceIndex} outside 0..${pattern.v.length - 1}`,
    );
  }
  const row = pattern.values[sliceIndex]!;
  const title = `linecut v = ${pattern.v[sliceIndex]} m/s, scene ${pattern.sceneHash.slice(0, 12)}`;
  if (isBlank([row])) return blankFigure(pattern, title);

  const [xLo, xHi] = extent(pattern.axis);
  const [fLo, fHi] = extent(row);
  const parts = header(title);
  parts.push(`<!-- value range: ${fmtSci(fLo)} to ${fmtSci(fHi)} -->`);
  parts.push(polyline(pattern.axis, row, xLo, xHi, Math.min(fLo, 0), fHi, "rgb(33,20,84)"));
  parts.push(
    ...axes(
      `${pattern.axisName} [${pattern.axisUnit}]`,
      `flux [${pattern.valueUnit}]`,
    ),
  );
  parts.push("</svg>");
  return { svg: parts.join("\n"), data: [row], warnings: [] };
}

/** Two-panel figure: baseline and shifted patterns, plus their pointwise
 * difference. Both CSVs must share the scene hash and the sample axis. */
export function renderPairedDifference(
  baseline: Pattern,
  shifted: Pattern,
  sliceIndex = 0,
): Figure {
  if (baseline.sceneHash !== shifted.sceneHash) {
    throw new Error(
      `scene hashes differ: ${baseline.sceneHash.slice(0, 12)} vs ${shifted.sceneHash.slice(0, 12)}`,
    );
  }
  if (
    baseline.axis.length !== shifted.axis.length ||
    baseline.axis.some((x, j) => x !== shifted.axis[j])
  ) {
    throw new Error("paired patterns have different axes");
  }
  const rowA = baseline.values[sliceIndex]!;
  const rowB = shifted.values[sliceIndex]!;
  const diff = rowA.map((a, j) => rowB[j]! - a);

  const [xLo, xHi] = extent(baseline.axis);
  const [, fHi] = extent([...rowA, ...rowB]);
  const [dLo, dHi] = extent(diff);

  const parts = header(
    `paired difference, scene ${baseline.sceneHash.slice(0, 12)}`,
  );
  // top panel: both patterns, shared scale
  const topH = PLOT_H / 2 - 10;
  parts.push(
    `<g transform="translate(0,0) scale(1,${fmt(topH / PLOT_H)})">`,
    polyline(baseline.axis, rowA, xLo, xHi, 0, fHi, "rgb(33,20,84)"),
    polyline(shifted.axis, rowB, xLo, xHi, 0, fHi, "rgb(200,60,30)"),
    "</g>",
  );
  // bottom panel: pointwise difference
  parts.push(
    `<g transform="translate(0,${fmt(topH + 20)}) scale(1,${fmt(topH / PLOT_H)})">`,
    polyline(baseline.axis, diff, xLo, xHi, dLo, dHi, "rgb(20,120,60)"),
    "</g>",
  );
  parts.push(`<!-- difference range: ${fmtSci(dLo)} to ${fmtSci(dHi)} -->`);
  parts.push(
    ...axes(
      `${baseline.axisName} [${baseline.axisUnit}]`,
      `flux / difference [${baseline.valueUnit}]`,
    ),
  );
  parts.push("</svg>");
  return { svg: parts.join("\n"), data: [rowA, rowB, diff], warnings: [] };
}
