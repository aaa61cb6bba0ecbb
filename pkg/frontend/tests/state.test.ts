import { describe, expect, it } from 'vitest';

import { initialState, update } from '../src/state.js';
import type { Action } from '../src/state.js';

describe('view-state reducer', () => {
  it('is pure: replaying one action sequence yields identical states', () => {
    const actions: Action[] = [
      { kind: 'set-grid', grid: { lo: 0.5, hi: 500, count: 30 } },
      { kind: 'set-alpha', alpha: 7.25 },
      { kind: 'toggle-background' },
      { kind: 'set-k', k: 3 },
      { kind: 'server-version', version: 2 },
    ];
    const run = () => actions.reduce(update, initialState());
    expect(run()).toEqual(run());
  });

  it('never mutates the previous state', () => {
    const before = initialState();
    const frozen = JSON.stringify(before);
    update(before, { kind: 'set-alpha', alpha: 99 });
    update(before, { kind: 'toggle-labels' });
    expect(JSON.stringify(before)).toBe(frozen);
  });

  it('clamps alpha into the slider bounds', () => {
    let s = initialState();
    s = update(s, { kind: 'set-alpha', alpha: 1e9 });
    expect(s.alpha).toBe(s.grid.hi);
    s = update(s, { kind: 'set-alpha', alpha: 1e-9 });
    expect(s.alpha).toBe(s.grid.lo);
    s = update(s, { kind: 'set-alpha', alpha: 'inf' });
    expect(s.alpha).toBe('inf');
  });

  it('re-clamps alpha when the grid shrinks', () => {
    let s = update(initialState(), { kind: 'set-alpha', alpha: 900 });
    s = update(s, { kind: 'set-grid', grid: { lo: 0.1, hi: 10, count: 20 } });
    expect(s.alpha).toBe(10);
  });

  it('rejects malformed grids', () => {
    const s = initialState();
    expect(update(s, { kind: 'set-grid', grid: { lo: -1, hi: 10, count: 20 } })).toBe(s);
    expect(update(s, { kind: 'set-grid', grid: { lo: 5, hi: 5, count: 20 } })).toBe(s);
    expect(update(s, { kind: 'set-grid', grid: { lo: 0.1, hi: 10, count: 1 } })).toBe(s);
  });

  it('snap-to-medoid stores the exact float, bypassing the clamp', () => {
    // medoid values must reach the server bit-identical
    const medoid = 8.886238162743403;
    const s = update(initialState(), { kind: 'snap-to-medoid', alpha: medoid });
    expect(s.alpha).toBe(medoid);
    expect(Object.is(s.alpha, medoid)).toBe(true);
  });
});
