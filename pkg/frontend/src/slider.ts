/**
 * Log-scale alpha slider with medoid tick marks. The native range input
 * runs over integer steps mapped to [0, 1] log positions, with one extra
 * stop past the top for alpha = infinity. Tick clicks snap alpha to the
 * exact medoid float from the /sweep payload (no string round trip).
 */

import type { AlphaValue, GridSpec } from './types.js';
import { INF_POSITION, alphaToPosition, positionToAlpha } from './scales.js';
import { formatAlpha } from './trace.js';

export const SLIDER_STEPS = 1000; // values 0..SLIDER_STEPS map to [0, 1]
export const SLIDER_MAX = SLIDER_STEPS + 20; // anything above is the inf stop

export function sliderValueToAlpha(value: number, grid: GridSpec): AlphaValue {
  if (value > SLIDER_STEPS) return 'inf';
  return positionToAlpha(value / SLIDER_STEPS, grid);
}

export function alphaToSliderValue(alpha: AlphaValue, grid: GridSpec): number {
  const position = alphaToPosition(alpha, grid);
  if (position >= INF_POSITION) return SLIDER_MAX;
  return Math.round(position * SLIDER_STEPS);
}

export interface SliderView {
  setMedoids(medoids: number[]): void;
  setAlpha(alpha: AlphaValue): void;
  setGrid(grid: GridSpec): void;
}

export function mountSlider(
  input: HTMLInputElement,
  tickHost: HTMLElement,
  readout: HTMLElement,
  grid0: GridSpec,
  onChange: (alpha: AlphaValue) => void,
  onSnap: (alpha: number) => void,
): SliderView {
  let grid = grid0;
  let medoids: number[] = [];

  input.min = '0';
  input.max = String(SLIDER_MAX);
  input.step = '1';

  function renderReadout(alpha: AlphaValue): void {
    readout.textContent = alpha === 'inf' ? 'alpha = inf' : `alpha = ${formatAlpha(alpha)}`;
  }

  function renderTicks(): void {
    tickHost.replaceChildren();
    medoids.forEach((medoid, i) => {
      const tick = document.createElement('button');
      tick.className = 'medoid-tick';
      tick.title = `medoid alpha = ${medoid}`;
      tick.textContent = formatAlpha(medoid);
      const frac = alphaToPosition(medoid, grid) * (SLIDER_STEPS / SLIDER_MAX);
      tick.style.left = `${(frac * 100).toFixed(2)}%`;
      tick.addEventListener('click', () => onSnap(medoids[i]));
      tickHost.appendChild(tick);
    });
  }

  input.addEventListener('input', () => {
    const alpha = sliderValueToAlpha(Number(input.value), grid);
    renderReadout(alpha);
    onChange(alpha);
  });

  return {
    setMedoids(values: number[]): void {
      medoids = values.slice();
      renderTicks();
    },
    setAlpha(alpha: AlphaValue): void {
      input.value = String(alphaToSliderValue(alpha, grid));
      renderReadout(alpha);
    },
    setGrid(next: GridSpec): void {
      grid = next;
      renderTicks();
    },
  };
}
