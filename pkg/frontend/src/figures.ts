/** The four figure builders: CSV tables in, scenes out. */

import { column, distinct, type DataTable } from "./csv.js";
import { hex, rdbu, viridis, type Rgb } from "./color.js";
import type { FigureSpec } from "./figspec.js";
import { addColorbar, makeFrame, type Frame, type Scene } from "./scene.js";
import { extent, padded } from "./scale.js";

export class FigureError extends Error {}

export interface WindingInfo {
  W: number;
  raw: number;
  center: [number, number];
  radius: number;
  samples: number;
}

/** Cell edges from grid centers: midpoints, extended half a step at the rim. */
function edges(centers: number[]): number[] {
  if (centers.length === 1) {
    const w = Math.max(Math.abs(centers[0]!) * 0.05, 0.5);
    return [centers[0]! - w, centers[0]! + w];
  }
  const e: number[] = [centers[0]! - (centers[1]! - centers[0]!) / 2];
  for (let i = 1; i < centers.length; i++) e.push((centers[i - 1]! + centers[i]!) / 2);
  e.push(centers[centers.length - 1]! + (centers[centers.length - 1]! - centers[centers.length - 2]!) / 2);
  return e;
}

interface HeatmapOptions {
  xCol: string;
  yCol: string;
  vCol: string;
  map: (t: number) => Rgb;
  domain?: [number, number];
  barLabel: string;
}

function heatmap(table: DataTable, spec: FigureSpec, defaults: FrameDefaults, opt: HeatmapOptions): Scene {
  const xs = column(table, opt.xCol);
  const ys = column(table, opt.yCol);
  const vs = column(table, opt.vCol);
  const gx = distinct(xs);
  const gy = distinct(ys);
  const ex = edges(gx);
  const ey = edges(gy);
  const domain = opt.domain ?? extent(vs);
  const span = domain[1] - domain[0] || 1;

  const frame = openFrame(spec, defaults, [ex[0]!, ex[ex.length - 1]!], [ey[0]!, ey[ey.length - 1]!], 86);

  const xi = new Map(gx.map((v, i) => [v, i]));
  const yi = new Map(gy.map((v, i) => [v, i]));
  for (let r = 0; r < xs.length; r++) {
    const i = xi.get(xs[r]!)!;
    const j = yi.get(ys[r]!)!;
    const x0 = frame.x.map(ex[i]!);
    const x1 = frame.x.map(ex[i + 1]!);
    const y0 = frame.y.map(ey[j + 1]!); // y axis points up, pixels down
    const y1 = frame.y.map(ey[j]!);
    frame.scene.elements.push({
      kind: "rect",
      x: x0,
      y: y0,
      w: x1 - x0 + 0.35, // overdraw a hair so cell seams never show
      h: y1 - y0 + 0.35,
      fill: hex(opt.map((vs[r]! - domain[0]) / span)),
    });
  }
  redrawFrameBorder(frame);
  addColorbar(frame, opt.map, domain, opt.barLabel);
  return frame.scene;
}

interface FrameDefaults {
  title: string;
  xLabel: string;
  yLabel: string;
  width: number;
  height: number;
}

function openFrame(
  spec: FigureSpec,
  d: FrameDefaults,
  xDomain: [number, number],
  yDomain: [number, number],
  rightGutter = 0,
): Frame {
  return makeFrame({
    width: spec.width ?? d.width,
    height: spec.height ?? d.height,
    title: spec.title ?? d.title,
    xLabel: spec.xLabel ?? d.xLabel,
    yLabel: spec.yLabel ?? d.yLabel,
    xDomain: spec.xRange ?? xDomain,
    yDomain: spec.yRange ?? yDomain,
    rightGutter,
  });
}

/** Heatmap cells paint over the frame; put it back on top. */
function redrawFrameBorder(frame: Frame): void {
  const { area } = frame;
  frame.scene.elements.push({
    kind: "polyline",
    points: [
      [area.left, area.top], [area.right, area.top],
      [area.right, area.bottom], [area.left, area.bottom],
    ],
    stroke: "#1a1a2e",
    width: 1.5,
    close: true,
  });
}

const LEP2_COLOR = "#3a6ea8";
const LEP3_COLOR = "#c83232";

export function epMap(table: DataTable, spec: FigureSpec): Scene {
  const eps = column(table, "eps");
  const delta = column(table, "delta");
  const order = column(table, "order");
  const frame = openFrame(
    spec,
    {
      title: "Liouvillian exceptional points",
      xLabel: "eps (rad/us)",
      yLabel: "delta (rad/us)",
      width: 720,
      height: 560,
    },
    padded(extent(eps)),
    padded(extent(delta)),
  );
  for (let i = 0; i < eps.length; i++) {
    if (order[i] !== 2) continue;
    frame.scene.elements.push({
      kind: "circle", cx: frame.x.map(eps[i]!), cy: frame.y.map(delta[i]!),
      r: 1.8, fill: LEP2_COLOR,
    });
  }
  for (let i = 0; i < eps.length; i++) {
    if (order[i] !== 3) continue;
    const cx = frame.x.map(eps[i]!);
    const cy = frame.y.map(delta[i]!);
    frame.scene.elements.push(
      { kind: "circle", cx, cy, r: 6, fill: LEP3_COLOR, stroke: "#7a1010", width: 1.5 },
      { kind: "line", x1: cx - 9, y1: cy, x2: cx + 9, y2: cy, stroke: "#7a1010", width: 1.2 },
      { kind: "line", x1: cx, y1: cy - 9, x2: cx, y2: cy + 9, stroke: "#7a1010", width: 1.2 },
    );
  }
  // legend, top right corner of the plot area
  const lx = frame.area.right - 128;
  const ly = frame.area.top + 18;
  frame.scene.elements.push(
    { kind: "circle", cx: lx, cy: ly, r: 2.5, fill: LEP2_COLOR },
    { kind: "text", x: lx + 10, y: ly + 4.5, text: "LEP2 line", size: 12, fill: "#1a1a2e", anchor: "start" },
    { kind: "circle", cx: lx, cy: ly + 20, r: 5, fill: LEP3_COLOR, stroke: "#7a1010", width: 1.2 },
    { kind: "text", x: lx + 10, y: ly + 24.5, text: "LEP3 point", size: 12, fill: "#1a1a2e", anchor: "start" },
  );
  return frame.scene;
}

export function windingTrajectory(table: DataTable, spec: FigureSpec, info?: WindingInfo): Scene {
  const phi = column(table, "phi");
  const r1 = column(table, "r1_norm");
  const r2 = column(table, "r2_norm");
  const frame = openFrame(
    spec,
    {
      title: "Resultant-vector trajectory",
      xLabel: "R1 / |R|",
      yLabel: "R2 / |R|",
      width: 560,
      height: 560,
    },
    [-1.3, 1.3],
    [-1.3, 1.3],
  );
  const { scene, x, y } = frame;

  // unit circle and origin crosshair as guides
  const circlePts: Array<[number, number]> = [];
  for (let k = 0; k <= 128; k++) {
    const a = (2 * Math.PI * k) / 128;
    circlePts.push([x.map(Math.cos(a)), y.map(Math.sin(a))]);
  }
  scene.elements.push(
    { kind: "polyline", points: circlePts, stroke: "#c9c9d4", width: 1 },
    { kind: "line", x1: x.map(-1.3), y1: y.map(0), x2: x.map(1.3), y2: y.map(0), stroke: "#c9c9d4", width: 1 },
    { kind: "line", x1: x.map(0), y1: y.map(-1.3), x2: x.map(0), y2: y.map(1.3), stroke: "#c9c9d4", width: 1 },
  );

  const maxPhi = phi[phi.length - 1]! || 2 * Math.PI;
  for (let i = 1; i < phi.length; i++) {
    scene.elements.push({
      kind: "line",
      x1: x.map(r1[i - 1]!), y1: y.map(r2[i - 1]!),
      x2: x.map(r1[i]!), y2: y.map(r2[i]!),
      stroke: hex(viridis(phi[i]! / maxPhi)),
      width: 2.5,
    });
  }

  // direction arrows at quarter turns
  for (const target of [0.25, 0.5, 0.75]) {
    let i = phi.findIndex((p) => p >= target * maxPhi);
    if (i < 1) i = 1;
    const ax = x.map(r1[i]!);
    const ay = y.map(r2[i]!);
    const ang = Math.atan2(ay - y.map(r2[i - 1]!), ax - x.map(r1[i - 1]!));
    for (const wing of [ang + Math.PI * 0.8, ang - Math.PI * 0.8]) {
      scene.elements.push({
        kind: "line", x1: ax, y1: ay,
        x2: ax + 9 * Math.cos(wing), y2: ay + 9 * Math.sin(wing),
        stroke: "#1a1a2e", width: 2,
      });
    }
  }

  scene.elements.push(
    { kind: "circle", cx: x.map(r1[0]!), cy: y.map(r2[0]!), r: 4, fill: "#1a1a2e" },
    { kind: "circle", cx: x.map(0), cy: y.map(0), r: 2.5, fill: "#1a1a2e" },
  );
  if (info) {
    scene.elements.push({
      kind: "text", x: x.map(0), y: y.map(0) - 14,
      text: `W = ${info.W}`, size: 17, fill: "#1a1a2e", anchor: "middle",
    });
  }
  return scene;
}

export function fidelityHeatmap(table: DataTable, spec: FigureSpec): Scene {
  return heatmap(
    table,
    spec,
    {
      title: "Reduced-model fidelity",
      xLabel: "t (us)",
      yLabel: "delta/2pi (MHz)",
      width: 760,
      height: 520,
    },
    { xCol: "t_us", yCol: "delta_MHz", vCol: "fidelity", map: viridis, barLabel: "F" },
  );
}

export function wigner(table: DataTable, spec: FigureSpec): Scene {
  const w = column(table, "w");
  const amp = Math.max(...w.map(Math.abs)) || 1;
  return heatmap(
    table,
    spec,
    { title: "Wigner function", xLabel: "x", yLabel: "p", width: 640, height: 560 },
    { xCol: "x", yCol: "p", vCol: "w", map: rdbu, domain: [-amp, amp], barLabel: "W(x,p)" },
  );
}

export function buildFigure(spec: FigureSpec, table: DataTable, info?: WindingInfo): Scene {
  switch (spec.kind) {
    case "ep-map":
      return epMap(table, spec);
    case "winding-trajectory":
      return windingTrajectory(table, spec, info);
    case "fidelity-heatmap":
      return fidelityHeatmap(table, spec);
    case "wigner":
      return wigner(table, spec);
  }
}
