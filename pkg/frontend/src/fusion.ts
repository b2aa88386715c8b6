/**
 * Client-side fusion: the same rule the display pipeline applies.
 *
 * A fused pixel is sum_j weights[j] * frames[j][p], divided by M in "mean"
 * mode, clamped to [0, 1]. Region fusion picks the inner or outer weight
 * vector per pixel from a membership buffer.
 */

import type { FusionMode } from "./bundle.js";

export function fuseGlobal(
  frames: Float64Array[],
  weights: number[],
  mode: FusionMode
): Float64Array {
  const m = frames.length;
  if (weights.length !== m) {
    throw new Error(`weight vector has length ${weights.length}, expected ${m}`);
  }
  const n = frames[0].length;
  const out = new Float64Array(n);
  for (let j = 0; j < m; j++) {
    const w = weights[j];
    const frame = frames[j];
    for (let p = 0; p < n; p++) {
      out[p] += w * frame[p];
    }
  }
  finish(out, m, mode);
  return out;
}

export function fuseRegion(
  frames: Float64Array[],
  inner: number[],
  outer: number[],
  membership: Uint8Array,
  mode: FusionMode
): Float64Array {
  const m = frames.length;
  if (inner.length !== m || outer.length !== m) {
    throw new Error(`inner/outer vectors must have length ${m}`);
  }
  const n = frames[0].length;
  if (membership.length !== n) {
    throw new Error(`membership buffer has ${membership.length} pixels, expected ${n}`);
  }
  const out = new Float64Array(n);
  for (let j = 0; j < m; j++) {
    const wi = inner[j];
    const wo = outer[j];
    const frame = frames[j];
    for (let p = 0; p < n; p++) {
      out[p] += (membership[p] ? wi : wo) * frame[p];
    }
  }
  finish(out, m, mode);
  return out;
}

function finish(out: Float64Array, m: number, mode: FusionMode): void {
  for (let p = 0; p < out.length; p++) {
    const v = mode === "mean" ? out[p] / m : out[p];
    out[p] = v < 0 ? 0 : v > 1 ? 1 : v;
  }
}

/** Closed-disk membership on integer pixel coordinates (x = column, y = row). */
export function diskMembership(
  width: number,
  height: number,
  cx: number,
  cy: number,
  radius: number
): Uint8Array {
  const out = new Uint8Array(width * height);
  const r2 = radius * radius;
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const dx = x - cx;
      const dy = y - cy;
      out[y * width + x] = dx * dx + dy * dy <= r2 ? 1 : 0;
    }
  }
  return out;
}

/** Greatest per-pixel deviation between two buffers (parity checks). */
export function maxAbsDiff(a: Float64Array, b: Float64Array): number {
  let worst = 0;
  for (let p = 0; p < a.length; p++) {
    const d = Math.abs(a[p] - b[p]);
    if (d > worst) worst = d;
  }
  return worst;
}
