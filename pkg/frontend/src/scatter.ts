/**
 * Canvas scatterplot of the current embedding: cPC1 x cPC2, colored by
 * label when present, optional background overlay, axes annotated with the
 * component eigenvalues. Falls back to a strip plot for k = 1 and to an
 * empty-state message when there is nothing to draw.
 */

import type { EmbeddingResponse } from './types.js';
import { linearScale, paddedExtent } from './scales.js';

// label colors: the four-subgroup toy uses 0..3 = red, blue, black, yellow
const LABEL_COLORS = [
  '#e53935', '#1e88e5', '#212121', '#fdd835',
  '#43a047', '#8e24aa', '#fb8c00', '#00acc1',
];
const SINGLE_COLOR = '#1e88e5';
const BACKGROUND_COLOR = 'rgba(120, 120, 120, 0.45)';
const MARGIN = { top: 16, right: 16, bottom: 42, left: 54 };

export function colorForLabel(label: number | null, colorByLabel: boolean): string {
  if (label === null || !colorByLabel) return SINGLE_COLOR;
  return LABEL_COLORS[((label % LABEL_COLORS.length) + LABEL_COLORS.length) % LABEL_COLORS.length];
}

function formatEigenvalue(value: number): string {
  return Math.abs(value) >= 1000 || (Math.abs(value) < 0.01 && value !== 0)
    ? value.toExponential(2)
    : value.toPrecision(4);
}

export function renderScatter(
  canvas: HTMLCanvasElement,
  payload: EmbeddingResponse | null,
  colorByLabel: boolean,
): void {
  const ctx = canvas.getContext('2d');
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);

  if (!payload || payload.points.length === 0) {
    ctx.fillStyle = '#888';
    ctx.font = '14px system-ui, sans-serif';
    ctx.textAlign = 'center';
    ctx.fillText('no embedding loaded', width / 2, height / 2);
    return;
  }

  const strip = payload.k === 1;
  const sets = [payload.points];
  if (payload.background_points) sets.push(payload.background_points);
  const xExtent = paddedExtent(sets, 0);
  const yExtent: [number, number] = strip ? [-1, 1] : paddedExtent(sets, 1);
  const sx = linearScale(xExtent, [MARGIN.left, width - MARGIN.right]);
  const sy = linearScale(yExtent, [height - MARGIN.bottom, MARGIN.top]);

  // axes
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
  const ev = payload.eigenvalues;
  ctx.fillText(
    `cPC1  (eigenvalue ${formatEigenvalue(ev[0] ?? 0)})`,
    (MARGIN.left + width - MARGIN.right) / 2,
    height - 10,
  );
  if (!strip) {
    ctx.save();
    ctx.translate(14, (MARGIN.top + height - MARGIN.bottom) / 2);
    ctx.rotate(-Math.PI / 2);
    ctx.fillText(`cPC2  (eigenvalue ${formatEigenvalue(ev[1] ?? 0)})`, 0, 0);
    ctx.restore();
  }

  if (payload.background_points) {
    ctx.fillStyle = BACKGROUND_COLOR;
    for (const p of payload.background_points) {
      const px = sx(p[0]);
      const py = strip ? sy(0) : sy(p[1] ?? 0);
      ctx.fillRect(px - 1.5, py - 1.5, 3, 3);
    }
  }

  const labels = payload.labels;
  const radius = payload.points.length > 2000 ? 1.6 : 3;
  for (let i = 0; i < payload.points.length; i++) {
    const p = payload.points[i];
    ctx.fillStyle = colorForLabel(labels ? labels[i] : null, colorByLabel);
    const px = sx(p[0]);
    const py = strip ? sy(0) : sy(p[1] ?? 0);
    ctx.beginPath();
    ctx.arc(px, py, radius, 0, 2 * Math.PI);
    ctx.fill();
  }
}

/** PNG snapshot of the current scatter, offered as a download */
export function downloadScatterPng(canvas: HTMLCanvasElement, filename: string): void {
  canvas.toBlob((blob) => {
    if (!blob) return;
    const url = URL.createObjectURL(blob);
    const link = document.createElement('a');
    link.href = url;
    link.download = filename;
    link.click();
    URL.revokeObjectURL(url);
  }, 'image/png');
}
