/**
 * View state and its pure update function. Rendering is a pure function of
 * (last fetched payloads, ViewState); replaying the same action sequence
 * over the same payloads yields identical rendered data.
 */

import type { AlphaValue, GridSpec } from './types.js';

export interface ViewState {
  alpha: AlphaValue;
  k: number;
  p: number;
  seed: number;
  grid: GridSpec;
  colorByLabel: boolean;
  overlayBackground: boolean;
  lastVersion: number | null;
}

export const DEFAULT_GRID: GridSpec = { lo: 0.1, hi: 1000, count: 40 };

export function initialState(): ViewState {
  return {
    alpha: 1.0,
    k: 2,
    p: 3,
    seed: 0,
    grid: { ...DEFAULT_GRID },
    colorByLabel: true,
    overlayBackground: false,
    lastVersion: null,
  };
}

export type Action =
  | { kind: 'set-alpha'; alpha: AlphaValue }
  | { kind: 'snap-to-medoid'; alpha: number }
  | { kind: 'set-k'; k: number }
  | { kind: 'set-p'; p: number }
  | { kind: 'set-seed'; seed: number }
  | { kind: 'set-grid'; grid: GridSpec }
  | { kind: 'toggle-labels' }
  | { kind: 'toggle-background' }
  | { kind: 'server-version'; version: number };

function clampAlpha(alpha: AlphaValue, grid: GridSpec): AlphaValue {
  if (alpha === 'inf') return alpha;
  return Math.min(grid.hi, Math.max(grid.lo, alpha));
}

export function update(state: ViewState, action: Action): ViewState {
  switch (action.kind) {
    case 'set-alpha':
      return { ...state, alpha: clampAlpha(action.alpha, state.grid) };
    case 'snap-to-medoid':
      // medoid values come from /sweep and must be preserved bit-exactly
      return { ...state, alpha: action.alpha };
    case 'set-k':
      return { ...state, k: Math.max(1, Math.floor(action.k)) };
    case 'set-p':
      return { ...state, p: Math.max(1, Math.floor(action.p)) };
    case 'set-seed':
      return { ...state, seed: Math.floor(action.seed) };
    case 'set-grid': {
      const grid = action.grid;
      if (!(grid.lo > 0) || !(grid.hi > grid.lo) || grid.count < 2) return state;
      return { ...state, grid, alpha: clampAlpha(state.alpha, grid) };
    }
    case 'toggle-labels':
      return { ...state, colorByLabel: !state.colorByLabel };
    case 'toggle-background':
      return { ...state, overlayBackground: !state.overlayBackground };
    case 'server-version':
      return { ...state, lastVersion: action.version };
  }
}
