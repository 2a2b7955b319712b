/** Scene serialization as standalone SVG markup. */

import type { Element, Scene } from "./scene.js";

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

const n = (v: number): string => String(Math.round(v * 100) / 100);

function render(el: Element): string {
  switch (el.kind) {
    case "rect":
      return `<rect x="${n(el.x)}" y="${n(el.y)}" width="${n(el.w)}" height="${n(el.h)}" fill="${el.fill}"/>`;
    case "line":
      return `<line x1="${n(el.x1)}" y1="${n(el.y1)}" x2="${n(el.x2)}" y2="${n(el.y2)}" stroke="${el.stroke}" stroke-width="${n(el.width)}"/>`;
    case "polyline": {
      const pts = el.points.map(([x, y]) => `${n(x)},${n(y)}`).join(" ");
      const tag = el.close ? "polygon" : "polyline";
      return `<${tag} points="${pts}" fill="none" stroke="${el.stroke}" stroke-width="${n(el.width)}" stroke-linejoin="round"/>`;
    }
    case "circle": {
      const fill = el.fill ?? "none";
      const stroke = el.stroke ? ` stroke="${el.stroke}" stroke-width="${n(el.width ?? 1)}"` : "";
      return `<circle cx="${n(el.cx)}" cy="${n(el.cy)}" r="${n(el.r)}" fill="${fill}"${stroke}/>`;
    }
    case "text": {
      const transform = el.rotate ? ` transform="rotate(-90 ${n(el.x)} ${n(el.y)})"` : "";
      return (
        `<text x="${n(el.x)}" y="${n(el.y)}" font-size="${n(el.size)}" fill="${el.fill}"` +
        ` text-anchor="${el.anchor}" font-family="Helvetica, Arial, sans-serif"${transform}>` +
        `${esc(el.text)}</text>`
      );
    }
  }
}

export function toSvg(scene: Scene): string {
  const body = scene.elements.map(render).join("\n  ");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" height="${scene.height}"` +
    ` viewBox="0 0 ${scene.width} ${scene.height}">\n` +
    `  <rect width="100%" height="100%" fill="${scene.background}"/>\n` +
    `  ${body}\n</svg>\n`
  );
}
