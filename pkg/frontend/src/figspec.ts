/** Figure-spec JSON: what to draw, from which CSV, to which file. */

export const KINDS = ["ep-map", "winding-trajectory", "fidelity-heatmap", "wigner"] as const;
export type FigureKind = (typeof KINDS)[number];

export interface FigureSpec {
  kind: FigureKind;
  /** kerrcat CSV with the data */
  input: string;
  /** winding.json companion, winding-trajectory only */
  winding?: string;
  /** output path base; .svg and .png are appended */
  output: string;
  title?: string;
  xLabel?: string;
  yLabel?: string;
  xRange?: [number, number];
  yRange?: [number, number];
  width?: number;
  height?: number;
}

export class SpecError extends Error {}

const KNOWN = new Set([
  "kind", "input", "winding", "output", "title",
  "xLabel", "yLabel", "xRange", "yRange", "width", "height",
]);

function asRange(v: unknown, name: string): [number, number] {
  if (!Array.isArray(v) || v.length !== 2 || !v.every((x) => typeof x === "number" && Number.isFinite(x))) {
    throw new SpecError(`${name} must be [lo, hi] with finite numbers`);
  }
  if (v[0] >= v[1]) throw new SpecError(`${name}: lo must be < hi`);
  return [v[0], v[1]];
}

export function parseFigureSpec(value: unknown, source = "<spec>"): FigureSpec {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new SpecError(`${source}: figure spec must be a JSON object`);
  }
  const obj = value as Record<string, unknown>;
  const unknown = Object.keys(obj).filter((k) => !KNOWN.has(k));
  if (unknown.length > 0) {
    throw new SpecError(`${source}: unknown fields: ${unknown.join(", ")}`);
  }
  const kind = obj.kind;
  if (typeof kind !== "string" || !(KINDS as readonly string[]).includes(kind)) {
    throw new SpecError(`${source}: kind must be one of ${KINDS.join(" | ")}`);
  }
  for (const field of ["input", "output"] as const) {
    if (typeof obj[field] !== "string" || obj[field] === "") {
      throw new SpecError(`${source}: ${field} must be a non-empty path`);
    }
  }
  for (const field of ["winding", "title", "xLabel", "yLabel"] as const) {
    if (obj[field] !== undefined && typeof obj[field] !== "string") {
      throw new SpecError(`${source}: ${field} must be a string`);
    }
  }
  for (const field of ["width", "height"] as const) {
    const v = obj[field];
    if (v !== undefined && (typeof v !== "number" || !Number.isInteger(v) || v < 200 || v > 4000)) {
      throw new SpecError(`${source}: ${field} must be an integer in [200, 4000]`);
    }
  }
  if (obj.winding !== undefined && kind !== "winding-trajectory") {
    throw new SpecError(`${source}: winding only applies to winding-trajectory`);
  }
  return {
    kind: kind as FigureKind,
    input: obj.input as string,
    winding: obj.winding as string | undefined,
    output: obj.output as string,
    title: obj.title as string | undefined,
    xLabel: obj.xLabel as string | undefined,
    yLabel: obj.yLabel as string | undefined,
    xRange: obj.xRange === undefined ? undefined : asRange(obj.xRange, `${source}: xRange`),
    yRange: obj.yRange === undefined ? undefined : asRange(obj.yRange, `${source}: yRange`),
    width: obj.width as number | undefined,
    height: obj.height as number | undefined,
  };
}
