/**
 * Geometry for the response-curve plot: log frequency on x, dB on y, plain
 * viewBox units so the SVG scales with its container.
 */

import type { ResponseCurve } from "./api.js";

export interface CurveBox {
  width: number;
  height: number;
  fMin: number;
  fMax: number;
  dbMin: number;
  dbMax: number;
}

export const DEFAULT_BOX: CurveBox = {
  width: 640,
  height: 180,
  fMin: 20,
  fMax: 20000,
  dbMin: -24,
  dbMax: 24,
};

export function xForFreq(f: number, box: CurveBox): number {
  const t = Math.log(f / box.fMin) / Math.log(box.fMax / box.fMin);
  return Math.min(box.width, Math.max(0, t * box.width));
}

export function yForDb(db: number, box: CurveBox): number {
  const clamped = Math.min(box.dbMax, Math.max(box.dbMin, db));
  const t = (box.dbMax - clamped) / (box.dbMax - box.dbMin);
  return t * box.height;
}

/** SVG path ("M x y L x y ...") through the sampled curve. */
export function curvePath(curve: ResponseCurve, box: CurveBox = DEFAULT_BOX): string {
  const n = Math.min(curve.freq_hz.length, curve.gain_db.length);
  if (n === 0) return "";
  const parts: string[] = [];
  for (let i = 0; i < n; i++) {
    const x = xForFreq(curve.freq_hz[i], box).toFixed(2);
    const y = yForDb(curve.gain_db[i], box).toFixed(2);
    parts.push(`${i === 0 ? "M" : "L"}${x} ${y}`);
  }
  return parts.join(" ");
}

export interface Tick {
  x: number;
  label: string;
}

/** Decade gridlines that fall inside the plotted band. */
export function decadeTicks(box: CurveBox = DEFAULT_BOX): Tick[] {
  const ticks: Tick[] = [];
  for (let f = 10; f <= box.fMax; f *= 10) {
    if (f < box.fMin) continue;
    const label = f >= 1000 ? `${f / 1000}k` : String(f);
    ticks.push({ x: xForFreq(f, box), label });
  }
  return ticks;
}
