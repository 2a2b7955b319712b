/** Colormaps as [r, g, b] in 0..255, sampled by t in [0, 1]. */

export type Rgb = [number, number, number];

// viridis control points (16 evenly spaced samples of the standard map)
const VIRIDIS: Rgb[] = [
  [68, 1, 84],
  [72, 26, 108],
  [71, 47, 125],
  [65, 68, 135],
  [57, 86, 140],
  [49, 104, 142],
  [42, 120, 142],
  [35, 136, 142],
  [31, 152, 139],
  [34, 168, 132],
  [53, 183, 121],
  [84, 197, 104],
  [122, 209, 81],
  [165, 219, 54],
  [210, 226, 27],
  [253, 231, 37],
];

// blue-white-red diverging map for signed fields
const RDBU: Rgb[] = [
  [5, 48, 97],
  [33, 102, 172],
  [67, 147, 195],
  [146, 197, 222],
  [209, 229, 240],
  [247, 247, 247],
  [253, 219, 199],
  [244, 165, 130],
  [214, 96, 77],
  [178, 24, 43],
  [103, 0, 31],
];

function sample(table: Rgb[], t: number): Rgb {
  const x = Math.min(Math.max(t, 0), 1) * (table.length - 1);
  const i = Math.min(Math.floor(x), table.length - 2);
  const f = x - i;
  const a = table[i]!;
  const b = table[i + 1]!;
  return [
    Math.round(a[0] + f * (b[0] - a[0])),
    Math.round(a[1] + f * (b[1] - a[1])),
    Math.round(a[2] + f * (b[2] - a[2])),
  ];
}

export const viridis = (t: number): Rgb => sample(VIRIDIS, t);
export const rdbu = (t: number): Rgb => sample(RDBU, t);

export function hex(c: Rgb): string {
  return "#" + c.map((v) => v.toString(16).padStart(2, "0")).join("");
}

export function parseHex(s: string): Rgb {
  const m = /^#([0-9a-fA-F]{6})$/.exec(s);
  if (!m) throw new Error(`not a #rrggbb color: ${JSON.stringify(s)}`);
  const n = parseInt(m[1]!, 16);
  return [(n >> 16) & 0xff, (n >> 8) & 0xff, n & 0xff];
}
