/**
 * Software rasterizer for scenes.
 *
 * Everything is drawn by coverage: each primitive knows its distance
 * field, pixels blend with alpha = clamped coverage. Slow compared to
 * a real 2D library, more than fast enough for a few thousand marks,
 * and it keeps the PNG output dependency-free.
 */

import { parseHex, type Rgb } from "./color.js";
import { ADVANCE, GLYPH_H, GLYPH_W, glyph, textWidth } from "./font.js";
import type { Element, Scene, TextEl } from "./scene.js";

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8ClampedArray; // RGBA, row-major

  constructor(width: number, height: number, background: Rgb) {
    this.width = width;
    this.height = height;
    this.data = new Uint8ClampedArray(width * height * 4);
    for (let i = 0; i < width * height; i++) {
      this.data[4 * i] = background[0];
      this.data[4 * i + 1] = background[1];
      this.data[4 * i + 2] = background[2];
      this.data[4 * i + 3] = 255;
    }
  }

  blend(x: number, y: number, c: Rgb, alpha: number): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height || alpha <= 0) return;
    const a = Math.min(alpha, 1);
    const i = 4 * (y * this.width + x);
    this.data[i] = this.data[i]! * (1 - a) + c[0] * a;
    this.data[i + 1] = this.data[i + 1]! * (1 - a) + c[1] * a;
    this.data[i + 2] = this.data[i + 2]! * (1 - a) + c[2] * a;
    this.data[i + 3] = 255;
  }

  /** Axis-aligned rectangle with exact fractional edge coverage. */
  fillRect(x: number, y: number, w: number, h: number, c: Rgb): void {
    const x1 = x + w;
    const y1 = y + h;
    const cover = (lo: number, hi: number, p: number) =>
      Math.max(0, Math.min(hi, p + 1) - Math.max(lo, p));
    for (let py = Math.floor(y); py < Math.ceil(y1); py++) {
      const cy = cover(y, y1, py);
      for (let px = Math.floor(x); px < Math.ceil(x1); px++) {
        this.blend(px, py, c, cy * cover(x, x1, px));
      }
    }
  }

  /** Anti-aliased segment of the given stroke width. */
  line(x1: number, y1: number, x2: number, y2: number, width: number, c: Rgb): void {
    const half = width / 2;
    const pad = half + 1;
    const dx = x2 - x1;
    const dy = y2 - y1;
    const len2 = dx * dx + dy * dy;
    const x0 = Math.floor(Math.min(x1, x2) - pad);
    const xN = Math.ceil(Math.max(x1, x2) + pad);
    const y0 = Math.floor(Math.min(y1, y2) - pad);
    const yN = Math.ceil(Math.max(y1, y2) + pad);
    for (let py = y0; py <= yN; py++) {
      for (let px = x0; px <= xN; px++) {
        const t = len2 === 0 ? 0 : Math.max(0, Math.min(1, ((px - x1) * dx + (py - y1) * dy) / len2));
        const qx = px - (x1 + t * dx);
        const qy = py - (y1 + t * dy);
        const d = Math.hypot(qx, qy);
        this.blend(px, py, c, half + 0.5 - d);
      }
    }
  }

  circle(cx: number, cy: number, r: number, fill: Rgb | null, stroke: Rgb | null, width: number): void {
    const pad = r + width / 2 + 1;
    for (let py = Math.floor(cy - pad); py <= Math.ceil(cy + pad); py++) {
      for (let px = Math.floor(cx - pad); px <= Math.ceil(cx + pad); px++) {
        const d = Math.hypot(px - cx, py - cy);
        if (fill) this.blend(px, py, fill, r + 0.5 - d);
        if (stroke) this.blend(px, py, stroke, width / 2 + 0.5 - Math.abs(d - r));
      }
    }
  }

  text(el: TextEl, scale: number): void {
    const c = parseHex(el.fill);
    const px = Math.max(1, Math.round((el.size * scale) / GLYPH_H));
    const w = textWidth(el.text, px);
    const shift = el.anchor === "middle" ? -w / 2 : el.anchor === "end" ? -w : 0;
    const bx = el.x * scale;
    const by = el.y * scale;
    for (let i = 0; i < el.text.length; i++) {
      const cols = glyph(el.text[i]!);
      for (let gc = 0; gc < GLYPH_W; gc++) {
        const bits = cols[gc]!;
        for (let gr = 0; gr < GLYPH_H; gr++) {
          if (!((bits >> gr) & 1)) continue;
          for (let sy = 0; sy < px; sy++) {
            for (let sx = 0; sx < px; sx++) {
              // glyph-frame offset from the anchor, baseline at the glyph box bottom
              const dx = shift + (i * ADVANCE + gc) * px + sx;
              const dy = (gr - GLYPH_H) * px + sy;
              if (el.rotate) this.blend(Math.round(bx + dy), Math.round(by - dx), c, 1);
              else this.blend(Math.round(bx + dx), Math.round(by + dy), c, 1);
            }
          }
        }
      }
    }
  }
}

/**
 * Draw a scene at an integer supersampling factor; the PNG comes out
 * scale times larger than the SVG's nominal size.
 */
export function rasterize(scene: Scene, scale = 2): Raster {
  const img = new Raster(scene.width * scale, scene.height * scale, parseHex(scene.background));
  for (const el of scene.elements) {
    switch (el.kind) {
      case "rect":
        img.fillRect(el.x * scale, el.y * scale, el.w * scale, el.h * scale, parseHex(el.fill));
        break;
      case "line":
        img.line(el.x1 * scale, el.y1 * scale, el.x2 * scale, el.y2 * scale, el.width * scale, parseHex(el.stroke));
        break;
      case "polyline": {
        const c = parseHex(el.stroke);
        const pts = el.close && el.points.length > 1 ? [...el.points, el.points[0]!] : el.points;
        for (let i = 1; i < pts.length; i++) {
          img.line(
            pts[i - 1]![0] * scale, pts[i - 1]![1] * scale,
            pts[i]![0] * scale, pts[i]![1] * scale,
            el.width * scale, c,
          );
        }
        break;
      }
      case "circle":
        img.circle(
          el.cx * scale, el.cy * scale, el.r * scale,
          el.fill ? parseHex(el.fill) : null,
          el.stroke ? parseHex(el.stroke) : null,
          (el.width ?? 1) * scale,
        );
        break;
      case "text":
        img.text(el, scale);
        break;
    }
  }
  return img;
}
