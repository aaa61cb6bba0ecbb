/**
 * Pure coordinate mappings: the logarithmic alpha slider and the linear
 * data-to-pixel scales used by the canvas views.
 */

import type { AlphaValue, GridSpec } from './types.js';

/** slider positions are normalized to [0, 1]; the infinity stop sits past 1 */
export const INF_POSITION = 1.05;

export function positionToAlpha(position: number, grid: GridSpec): AlphaValue {
  if (position > 1) return 'inf';
  const clamped = Math.min(1, Math.max(0, position));
  return grid.lo * Math.pow(grid.hi / grid.lo, clamped);
}

export function alphaToPosition(alpha: AlphaValue, grid: GridSpec): number {
  if (alpha === 'inf') return INF_POSITION;
  const clamped = Math.min(grid.hi, Math.max(grid.lo, alpha));
  return Math.log(clamped / grid.lo) / Math.log(grid.hi / grid.lo);
}

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1; // degenerate domain maps to the range midpoint
  const fn = ((value: number) =>
    d1 === d0 ? (r0 + r1) / 2 : r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

/** min/max of one coordinate over point sets, padded by a fraction of the span */
export function paddedExtent(
  pointSets: number[][][],
  axis: number,
  pad = 0.06,
): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const points of pointSets) {
    for (const p of points) {
      const v = p[axis] ?? 0;
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (lo === Infinity) return [0, 1];
  if (lo === hi) return [lo - 1, hi + 1];
  const span = hi - lo;
  return [lo - pad * span, hi + pad * span];
}

/**
 * Endpoints of the tangent segment with slope 1/alpha through a variance
 * pair, in data coordinates. alpha = "inf" draws a horizontal tangent.
 */
export function tangentSegment(
  pair: [number, number],
  alpha: AlphaValue,
  halfSpanX: number,
): [[number, number], [number, number]] {
  const [x, y] = pair;
  const slope = alpha === 'inf' ? 0 : 1 / alpha;
  // cap the vertical reach so near-vertical tangents (tiny alpha) stay visible
  let dx = halfSpanX;
  let dy = slope * halfSpanX;
  if (Math.abs(dy) > halfSpanX * 4) {
    dy = Math.sign(dy) * halfSpanX * 4;
    dx = dy / slope;
  }
  return [
    [x - dx, y - dy],
    [x + dx, y + dy],
  ];
}

/** true when both coordinates never increase along the sequence */
export function isMonotoneNonIncreasing(
  pairs: [number, number][],
  tol = 1e-9,
): boolean {
  for (let i = 1; i < pairs.length; i++) {
    if (pairs[i][0] > pairs[i - 1][0] + tol) return false;
    if (pairs[i][1] > pairs[i - 1][1] + tol) return false;
  }
  return true;
}
