/**
 * Feature-weight bar chart: per-feature contribution of one component,
 * values in [0, 1]. Shows the strongest 30 features by default (dimension
 * can reach thousands) with an expand control for the full set.
 */

import type { WeightsResponse } from './types.js';

export const TOP_N = 30;

export interface WeightBar {
  index: number;
  value: number;
}

/** strongest-first ordering; ties break on the lower feature index */
export function topWeights(weights: number[], limit: number): WeightBar[] {
  const bars = weights.map((value, index) => ({ index, value }));
  bars.sort((a, b) => b.value - a.value || a.index - b.index);
  return bars.slice(0, Math.max(0, limit));
}

const MARGIN = { top: 16, right: 10, bottom: 34, left: 40 };

export function renderWeights(
  canvas: HTMLCanvasElement,
  payload: WeightsResponse | null,
  expanded: boolean,
): void {
  const ctx = canvas.getContext('2d');
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);

  if (!payload) {
    ctx.fillStyle = '#888';
    ctx.font = '14px system-ui, sans-serif';
    ctx.textAlign = 'center';
    ctx.fillText('no weights loaded', width / 2, height / 2);
    return;
  }

  const bars = topWeights(payload.weights, expanded ? payload.weights.length : TOP_N);
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const slot = plotW / bars.length;
  const barW = Math.max(1, Math.min(18, slot * 0.8));

  ctx.strokeStyle = '#ccc';
  ctx.beginPath();
  ctx.moveTo(MARGIN.left, MARGIN.top);
  ctx.lineTo(MARGIN.left, height - MARGIN.bottom);
  ctx.lineTo(width - MARGIN.right, height - MARGIN.bottom);
  ctx.stroke();
  ctx.fillStyle = '#555';
  ctx.font = '11px system-ui, sans-serif';
  ctx.textAlign = 'right';
  ctx.fillText('1.0', MARGIN.left - 4, MARGIN.top + 4);
  ctx.fillText('0', MARGIN.left - 4, height - MARGIN.bottom);

  ctx.fillStyle = '#43a047';
  bars.forEach((bar, i) => {
    const x = MARGIN.left + i * slot + (slot - barW) / 2;
    const h = bar.value * plotH;
    ctx.fillRect(x, height - MARGIN.bottom - h, barW, h);
  });

  // feature indices under the tallest few bars
  ctx.fillStyle = '#777';
  ctx.textAlign = 'center';
  const labelEvery = Math.max(1, Math.ceil(bars.length / 15));
  bars.forEach((bar, i) => {
    if (i % labelEvery === 0) {
      ctx.fillText(String(bar.index), MARGIN.left + i * slot + slot / 2, height - MARGIN.bottom + 14);
    }
  });
  ctx.textAlign = 'left';
  ctx.fillText(
    `component ${payload.component}, ${bars.length}/${payload.weights.length} features`,
    MARGIN.left,
    12,
  );
}
