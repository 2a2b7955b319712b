/**
 * Backend-neutral figure description.
 *
 * Figure builders emit a flat element list in pixel coordinates
 * (y down); svg.ts serializes it as markup, raster.ts draws it into an
 * RGBA buffer for PNG. Keeping the set tiny (rect, line, polyline,
 * circle, text) is what lets the two backends stay exactly in sync.
 */

export interface RectEl {
  kind: "rect";
  x: number;
  y: number;
  w: number;
  h: number;
  fill: string;
}

export interface LineEl {
  kind: "line";
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  stroke: string;
  width: number;
}

export interface PolylineEl {
  kind: "polyline";
  points: Array<[number, number]>;
  stroke: string;
  width: number;
  close?: boolean;
}

export interface CircleEl {
  kind: "circle";
  cx: number;
  cy: number;
  r: number;
  fill?: string;
  stroke?: string;
  width?: number;
}

export interface TextEl {
  kind: "text";
  x: number;
  y: number; // baseline
  text: string;
  size: number;
  fill: string;
  anchor: "start" | "middle" | "end";
  rotate?: boolean; // 90 degrees counterclockwise about (x, y)
}

export type Element = RectEl | LineEl | PolylineEl | CircleEl | TextEl;

export interface Scene {
  width: number;
  height: number;
  background: string;
  elements: Element[];
}

export interface PlotArea {
  left: number;
  top: number;
  right: number;
  bottom: number;
}

import { linearScale, tickLabel, ticks, type Scale } from "./scale.js";

export interface Frame {
  scene: Scene;
  area: PlotArea;
  x: Scale;
  y: Scale;
}

export interface FrameOptions {
  width: number;
  height: number;
  title: string;
  xLabel: string;
  yLabel: string;
  xDomain: [number, number];
  yDomain: [number, number];
  /** extra pixels kept free on the right, e.g. for a colorbar */
  rightGutter?: number;
}

const FG = "#1a1a2e";
const GRID = "#d8d8e0";
const FONT = 13;

/** Axes, ticks, grid, title; returns scales mapping data to pixels. */
export function makeFrame(opts: FrameOptions): Frame {
  const area: PlotArea = {
    left: 74,
    top: 44,
    right: opts.width - 24 - (opts.rightGutter ?? 0),
    bottom: opts.height - 56,
  };
  const x = linearScale(opts.xDomain, [area.left, area.right]);
  const y = linearScale(opts.yDomain, [area.bottom, area.top]);
  const el: Element[] = [];

  const xticks = ticks(opts.xDomain);
  const yticks = ticks(opts.yDomain);
  const xstep = xticks.length > 1 ? xticks[1]! - xticks[0]! : 1;
  const ystep = yticks.length > 1 ? yticks[1]! - yticks[0]! : 1;

  for (const t of xticks) {
    const px = x.map(t);
    el.push({ kind: "line", x1: px, y1: area.top, x2: px, y2: area.bottom, stroke: GRID, width: 1 });
    el.push({ kind: "line", x1: px, y1: area.bottom, x2: px, y2: area.bottom + 5, stroke: FG, width: 1 });
    el.push({
      kind: "text", x: px, y: area.bottom + 20, text: tickLabel(t, xstep),
      size: FONT, fill: FG, anchor: "middle",
    });
  }
  for (const t of yticks) {
    const py = y.map(t);
    el.push({ kind: "line", x1: area.left, y1: py, x2: area.right, y2: py, stroke: GRID, width: 1 });
    el.push({ kind: "line", x1: area.left - 5, y1: py, x2: area.left, y2: py, stroke: FG, width: 1 });
    el.push({
      kind: "text", x: area.left - 9, y: py + FONT * 0.35, text: tickLabel(t, ystep),
      size: FONT, fill: FG, anchor: "end",
    });
  }

  // frame on top of gridlines
  el.push({ kind: "polyline", points: [
    [area.left, area.top], [area.right, area.top],
    [area.right, area.bottom], [area.left, area.bottom],
  ], stroke: FG, width: 1.5, close: true });

  el.push({
    kind: "text", x: (area.left + area.right) / 2, y: area.bottom + 42,
    text: opts.xLabel, size: FONT + 1, fill: FG, anchor: "middle",
  });
  el.push({
    kind: "text", x: 22, y: (area.top + area.bottom) / 2,
    text: opts.yLabel, size: FONT + 1, fill: FG, anchor: "middle", rotate: true,
  });
  el.push({
    kind: "text", x: (area.left + area.right) / 2, y: 26,
    text: opts.title, size: FONT + 3, fill: FG, anchor: "middle",
  });

  return {
    scene: { width: opts.width, height: opts.height, background: "#ffffff", elements: el },
    area,
    x,
    y,
  };
}

/** Vertical colorbar in the right gutter with min/mid/max labels. */
export function addColorbar(
  frame: Frame,
  map: (t: number) => [number, number, number],
  domain: [number, number],
  label: string,
): void {
  const { area, scene } = frame;
  const xs = area.right + 16;
  const w = 16;
  const steps = 64;
  const h = (area.bottom - area.top) / steps;
  for (let i = 0; i < steps; i++) {
    const t = 1 - i / (steps - 1);
    const c = map(t);
    scene.elements.push({
      kind: "rect", x: xs, y: area.top + i * h, w, h: h + 0.75,
      fill: "#" + c.map((v) => v.toString(16).padStart(2, "0")).join(""),
    });
  }
  scene.elements.push({ kind: "polyline", points: [
    [xs, area.top], [xs + w, area.top], [xs + w, area.bottom], [xs, area.bottom],
  ], stroke: FG, width: 1, close: true });
  const labelAt = (t: number, v: number) => {
    scene.elements.push({
      kind: "text", x: xs + w + 6, y: area.bottom - t * (area.bottom - area.top) + FONT * 0.35,
      text: formatShort(v), size: FONT - 1, fill: FG, anchor: "start",
    });
  };
  labelAt(0, domain[0]);
  labelAt(0.5, (domain[0] + domain[1]) / 2);
  labelAt(1, domain[1]);
  scene.elements.push({
    kind: "text", x: xs + w / 2, y: area.top - 10, text: label,
    size: FONT - 1, fill: FG, anchor: "middle",
  });
}

export function formatShort(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(2);
  return String(parseFloat(v.toPrecision(4)));
}
