/**
 * kerrcat-figures render <figure-spec.json> [...more specs]
 *
 * Each spec names a kind, an input CSV from the kerrcat CLI, and an
 * output base path; the command writes <base>.svg and <base>.png.
 * Exit codes mirror the producer: 2 bad spec, 3 bad data, 4 I/O.
 */

import { mkdir, readFile, writeFile } from "node:fs/promises";
import { dirname } from "node:path";
import { CsvError, readTable } from "./csv.js";
import { FigureError, buildFigure, type WindingInfo } from "./figures.js";
import { SpecError, parseFigureSpec } from "./figspec.js";
import { encodePng } from "./png.js";
import { rasterize } from "./raster.js";
import { toSvg } from "./svg.js";

const USAGE = "usage: kerrcat-figures render <figure-spec.json> [...more]";

async function readWindingInfo(path: string): Promise<WindingInfo> {
  const raw = JSON.parse(await readFile(path, "utf-8"));
  if (typeof raw?.W !== "number" || !Array.isArray(raw?.center)) {
    throw new FigureError(`${path}: not a winding result file`);
  }
  return raw as WindingInfo;
}

export async function renderSpecFile(path: string): Promise<string[]> {
  const spec = parseFigureSpec(JSON.parse(await readFile(path, "utf-8")), path);
  const table = await readTable(spec.input);
  const info = spec.winding ? await readWindingInfo(spec.winding) : undefined;
  const scene = buildFigure(spec, table, info);

  await mkdir(dirname(spec.output), { recursive: true });
  const svgPath = `${spec.output}.svg`;
  const pngPath = `${spec.output}.png`;
  await writeFile(svgPath, toSvg(scene));
  const img = rasterize(scene);
  await writeFile(pngPath, encodePng(img.width, img.height, img.data));
  return [svgPath, pngPath];
}

export async function main(argv: string[]): Promise<number> {
  if (argv[0] !== "render" || argv.length < 2) {
    console.error(USAGE);
    return 2;
  }
  for (const specPath of argv.slice(1)) {
    try {
      const written = await renderSpecFile(specPath);
      console.log(`rendered ${specPath} -> ${written.join(", ")}`);
    } catch (err) {
      if (err instanceof SpecError || err instanceof SyntaxError) {
        console.error(`figure spec error: ${(err as Error).message}`);
        return 2;
      }
      if (err instanceof CsvError || err instanceof FigureError) {
        console.error(`data error: ${(err as Error).message}`);
        return 3;
      }
      if (err instanceof Error && "code" in err) {
        console.error(`i/o error: ${err.message}`);
        return 4;
      }
      throw err;
    }
  }
  return 0;
}

if (process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!)) {
  process.exitCode = await main(process.argv.slice(2));
}
