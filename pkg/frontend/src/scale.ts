/** Linear axis scales and tick placement. */

export interface Scale {
  domain: [number, number];
  range: [number, number];
  map(v: number): number;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1; // degenerate domains map everything to the range start
  return {
    domain,
    range,
    map: (v) => r0 + ((v - d0) / span) * (r1 - r0),
  };
}

/** Round tick step: 1, 2 or 5 times a power of ten covering the span. */
export function tickStep(span: number, count: number): number {
  const raw = Math.abs(span) / Math.max(count, 1);
  const pow = Math.pow(10, Math.floor(Math.log10(raw)));
  const frac = raw / pow;
  if (frac <= 1.5) return pow;
  if (frac <= 3.5) return 2 * pow;
  if (frac <= 7.5) return 5 * pow;
  return 10 * pow;
}

export function ticks(domain: [number, number], count = 6): number[] {
  const [lo, hi] = domain[0] <= domain[1] ? domain : [domain[1], domain[0]];
  if (lo === hi) return [lo];
  const step = tickStep(hi - lo, count);
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    // snap away the accumulation error so labels print clean
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

/** Shortest decimal label that distinguishes neighboring ticks. */
export function tickLabel(v: number, step: number): string {
  if (v === 0) return "0";
  const decimals = Math.max(0, -Math.floor(Math.log10(step) + 1e-9));
  if (Math.abs(v) >= 1e5 || Math.abs(v) < 1e-4) {
    return v.toExponential(1).replace("e", "e");
  }
  return v.toFixed(Math.min(decimals, 6));
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) throw new Error("extent of an empty sequence");
  return [lo, hi];
}

/** Symmetric padding, with a fallback width for flat data. */
export function padded(e: [number, number], frac = 0.06): [number, number] {
  const w = e[1] - e[0];
  const pad = w > 0 ? w * frac : Math.max(Math.abs(e[0]) * frac, 1e-6);
  return [e[0] - pad, e[1] + pad];
}
