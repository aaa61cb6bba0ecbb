/**
 * Server payload types, mirrored verbatim from the JSON API. Every number
 * rendered by the UI comes from these payloads; the client performs no
 * numeric computation beyond presentation.
 */

/** alpha travels as a number, or the literal string "inf" for the null-space fit */
export type AlphaValue = number | 'inf';

export interface DatasetInfo {
  d: number;
  n: number;
  m: number;
  version: number;
}

export interface EmbeddingResponse {
  alpha: AlphaValue;
  k: number;
  points: number[][];
  labels: number[] | null;
  variance_pairs: [number, number][];
  eigenvalues: number[];
  version: number;
  background_points?: number[][];
}

export interface SweepResponse {
  alphas: number[];
  /** top-component (target_var, background_var) per grid alpha */
  variance_pairs: [number, number][];
  affinity: number[][];
  cluster_labels: number[];
  medoid_alphas: number[];
  version: number;
}

export interface WeightsResponse {
  alpha: AlphaValue;
  component: number;
  weights: number[];
  version: number;
}

export interface GridSpec {
  lo: number;
  hi: number;
  count: number;
}

export function gridParam(grid: GridSpec): string {
  return `${grid.lo}:${grid.hi}:${grid.count}`;
}

export function alphaParam(alpha: AlphaValue): string {
  // exact round-trip: medoid snaps must reach the server bit-identical
  return alpha === 'inf' ? 'inf' : alpha.toPrecision(17);
}
