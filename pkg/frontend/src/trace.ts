/**
 * Variance-pair trace: the swept (target variance, background variance)
 * curve, with the current alpha's pair highlighted and its slope-1/alpha
 * tangent segment. As alpha grows the trace walks toward the lower left.
 */

import type { AlphaValue, SweepResponse } from './types.js';
import { linearScale, paddedExtent, tangentSegment } from './scales.js';

const MARGIN = { top: 16, right: 16, bottom: 42, left: 60 };

export function renderTrace(
  canvas: HTMLCanvasElement,
  sweep: SweepResponse | null,
  currentAlpha: AlphaValue,
  currentPair: [number, number] | null,
): void {
  const ctx = canvas.getContext('2d');
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);

  if (!sweep || sweep.variance_pairs.length === 0) {
    ctx.fillStyle = '#888';
    ctx.font = '14px system-ui, sans-serif';
    ctx.textAlign = 'center';
    ctx.fillText('run a sweep to see the variance trace', width / 2, height / 2);
    return;
  }

  const allPoints: number[][][] = [sweep.variance_pairs.map((p) => [p[0], p[1]])];
  if (currentPair) allPoints.push([[currentPair[0], currentPair[1]]]);
  const xExtent = paddedExtent(allPoints, 0);
  const yExtent = paddedExtent(allPoints, 1);
  const sx = linearScale(xExtent, [MARGIN.left, width - MARGIN.right]);
  const sy = linearScale(yExtent, [height - MARGIN.bottom, MARGIN.top]);

  ctx.strokeStyle = '#ccc';
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(MARGIN.left, MARGIN.top);
  ctx.lineTo(MARGIN.left, height - MARGIN.bottom);
  ctx.lineTo(width - MARGIN.right, height - MARGIN.bottom);
  ctx.stroke();
  ctx.fillStyle = '#555';
  ctx.font = '12px system-ui, sans-serif';
  ctx.textAlign = 'center';
  ctx.fillText('target variance', (MARGIN.left + width - MARGIN.right) / 2, height - 10);
  ctx.save();
  ctx.translate(14, (MARGIN.top + height - MARGIN.bottom) / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText('background variance', 0, 0);
  ctx.restore();

  // trace polyline in grid order (alpha ascending walks toward lower left)
  ctx.strokeStyle = '#1e88e5';
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  sweep.variance_pairs.forEach((p, i) => {
    if (i === 0) ctx.moveTo(sx(p[0]), sy(p[1]));
    else ctx.lineTo(sx(p[0]), sy(p[1]));
  });
  ctx.stroke();
  ctx.fillStyle = '#1e88e5';
  for (const p of sweep.variance_pairs) {
    ctx.beginPath();
    ctx.arc(sx(p[0]), sy(p[1]), 2, 0, 2 * Math.PI);
    ctx.fill();
  }

  if (currentPair) {
    const halfSpanX = (xExtent[1] - xExtent[0]) / 6;
    const [a, b] = tangentSegment(currentPair, currentAlpha, halfSpanX);
    ctx.strokeStyle = '#fb8c00';
    ctx.lineWidth = 1.5;
    ctx.setLineDash([5, 4]);
    ctx.beginPath();
    ctx.moveTo(sx(a[0]), sy(a[1]));
    ctx.lineTo(sx(b[0]), sy(b[1]));
    ctx.stroke();
    ctx.setLineDash([]);

    ctx.fillStyle = '#e53935';
    ctx.beginPath();
    ctx.arc(sx(currentPair[0]), sy(currentPair[1]), 5, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = '#555';
    ctx.textAlign = 'left';
    const alphaText = currentAlpha === 'inf' ? 'inf' : formatAlpha(currentAlpha);
    ctx.fillText(
      `alpha = ${alphaText}, slope 1/alpha`,
      Math.min(sx(currentPair[0]) + 8, width - 150),
      Math.max(sy(currentPair[1]) - 8, 14),
    );
  }
}

export function formatAlpha(alpha: number): string {
  if (alpha >= 100) return alpha.toFixed(0);
  if (alpha >= 1) return alpha.toFixed(2);
  return alpha.toPrecision(3);
}
