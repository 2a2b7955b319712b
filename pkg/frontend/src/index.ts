export { CsvError, column, distinct, parseTable, readTable, type DataTable } from "./csv.js";
export { hex, parseHex, rdbu, viridis, type Rgb } from "./color.js";
export { extent, linearScale, padded, tickLabel, tickStep, ticks, type Scale } from "./scale.js";
export { addColorbar, makeFrame, type Element, type Frame, type Scene } from "./scene.js";
export { toSvg } from "./svg.js";
export { Raster, rasterize } from "./raster.js";
export { encodePng } from "./png.js";
export { glyph, glyphArt, textWidth, ADVANCE, GLYPH_H, GLYPH_W } from "./font.js";
export { KINDS, SpecError, parseFigureSpec, type FigureKind, type FigureSpec } from "./figspec.js";
export {
  FigureError,
  buildFigure,
  epMap,
  fidelityHeatmap,
  wigner,
  windingTrajectory,
  type WindingInfo,
} from "./figures.js";
export { main, renderSpecFile } from "./cli.js";
