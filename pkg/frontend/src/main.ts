/**
 * Explorer wiring: upload a dataset pair, sweep the alpha grid, then steer
 * alpha with the log slider while the scatterplot, variance trace, and
 * feature weights re-render from fresh server payloads. Every displayed
 * number is server-provided; this file only orchestrates fetches and hands
 * payloads to the renderers.
 */

import { ApiClient, ApiError } from './api.js';
import { debounce } from './debounce.js';
import { initialState, update } from './state.js';
import type { ViewState } from './state.js';
import { downloadScatterPng, renderScatter } from './scatter.js';
import { mountSlider } from './slider.js';
import { renderTrace } from './trace.js';
import { renderWeights } from './weights.js';
import type {
  AlphaValue,
  EmbeddingResponse,
  SweepResponse,
  WeightsResponse,
} from './types.js';

const DEBOUNCE_MS = 75;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

// ---------------------------------------------------------------------------
// DOM
// ---------------------------------------------------------------------------

const serverInput = el<HTMLInputElement>('server-url');
const targetFile = el<HTMLInputElement>('target-file');
const backgroundFile = el<HTMLInputElement>('background-file');
const labelsFile = el<HTMLInputElement>('labels-file');
const uploadButton = el<HTMLButtonElement>('upload-button');
const datasetInfo = el<HTMLSpanElement>('dataset-info');

const gridLo = el<HTMLInputElement>('grid-lo');
const gridHi = el<HTMLInputElement>('grid-hi');
const gridCount = el<HTMLInputElement>('grid-count');
const kInput = el<HTMLInputElement>('k-input');
const pInput = el<HTMLInputElement>('p-input');
const seedInput = el<HTMLInputElement>('seed-input');
const sweepButton = el<HTMLButtonElement>('sweep-button');

const sliderInput = el<HTMLInputElement>('alpha-slider');
const tickHost = el<HTMLElement>('medoid-ticks');
const alphaReadout = el<HTMLSpanElement>('alpha-readout');

const scatterCanvas = el<HTMLCanvasElement>('scatter-canvas');
const traceCanvas = el<HTMLCanvasElement>('trace-canvas');
const weightsCanvas = el<HTMLCanvasElement>('weights-canvas');

const labelToggle = el<HTMLInputElement>('label-toggle');
const backgroundToggle = el<HTMLInputElement>('background-toggle');
const componentSelect = el<HTMLSelectElement>('component-select');
const expandWeights = el<HTMLInputElement>('expand-weights');
const snapshotButton = el<HTMLButtonElement>('snapshot-button');

const toast = el<HTMLDivElement>('toast');
const toastMessage = el<HTMLSpanElement>('toast-message');
const toastRetry = el<HTMLButtonElement>('toast-retry');

// ---------------------------------------------------------------------------
// State
// ---------------------------------------------------------------------------

let state: ViewState = initialState();
let client = new ApiClient(serverInput.value.replace(/\/$/, ''));
let lastEmbedding: EmbeddingResponse | null = null;
let lastSweep: SweepResponse | null = null;
let lastWeights: WeightsResponse | null = null;
let lastFailed: (() => void) | null = null;

function dispatch(action: Parameters<typeof update>[1]): void {
  state = update(state, action);
}

function showToast(message: string, retry: (() => void) | null): void {
  toastMessage.textContent = message;
  lastFailed = retry;
  toastRetry.style.display = retry ? 'inline-block' : 'none';
  toast.classList.add('visible');
}

function hideToast(): void {
  toast.classList.remove('visible');
  lastFailed = null;
}

function renderAll(): void {
  renderScatter(scatterCanvas, lastEmbedding, state.colorByLabel);
  renderTrace(
    traceCanvas,
    lastSweep,
    state.alpha,
    lastEmbedding ? lastEmbedding.variance_pairs[0] ?? null : null,
  );
  renderWeights(weightsCanvas, lastWeights, expandWeights.checked);
}

/**
 * Version discipline: a payload from a different server version than the
 * one we last saw means another upload happened (or ours raced); adopt the
 * newest version and transparently refetch everything.
 */
function reconcileVersion(version: number): boolean {
  if (state.lastVersion === null || version === state.lastVersion) {
    dispatch({ kind: 'server-version', version });
    return true;
  }
  if (version > state.lastVersion) {
    dispatch({ kind: 'server-version', version });
    void refreshSweep();
    void refreshEmbedding();
    return false;
  }
  // stale payload from before the latest upload: drop and refetch
  void refreshEmbedding();
  return false;
}

// ---------------------------------------------------------------------------
// Fetch orchestration
// ---------------------------------------------------------------------------

async function refreshEmbedding(): Promise<void> {
  try {
    const payload = await client.fetchEmbedding(state.alpha, state.k, state.overlayBackground);
    if (!payload) return; // superseded by a newer slider position
    if (!reconcileVersion(payload.version)) return;
    lastEmbedding = payload;
    hideToast();
    renderAll();
    void refreshWeights();
  } catch (err) {
    report(err, () => void refreshEmbedding());
  }
}

async function refreshSweep(): Promise<void> {
  try {
    const payload = await client.fetchSweep(state.grid, state.k, state.p, state.seed);
    if (!payload) return;
    if (!reconcileVersion(payload.version)) return;
    lastSweep = payload;
    slider.setMedoids(payload.medoid_alphas);
    hideToast();
    renderAll();
  } catch (err) {
    report(err, () => void refreshSweep());
  }
}

async function refreshWeights(): Promise<void> {
  try {
    const component = Number(componentSelect.value);
    const payload = await client.fetchWeights(state.alpha, component, state.k);
    if (!payload) return;
    lastWeights = payload;
    renderWeights(weightsCanvas, lastWeights, expandWeights.checked);
  } catch (err) {
    // weights are auxiliary; surface the message without a retry prompt
    report(err, null);
  }
}

function report(err: unknown, retry: (() => void) | null): void {
  if (err instanceof ApiError) {
    showToast(err.message, retry);
  } else {
    showToast(`network error: ${(err as Error).message ?? err}`, retry);
  }
}

const debouncedEmbedding = debounce<AlphaValue>(DEBOUNCE_MS, () => {
  void refreshEmbedding();
});

// ---------------------------------------------------------------------------
// Controls
// ---------------------------------------------------------------------------

const slider = mountSlider(
  sliderInput,
  tickHost,
  alphaReadout,
  state.grid,
  (alpha) => {
    dispatch({ kind: 'set-alpha', alpha });
    debouncedEmbedding(alpha);
  },
  (medoid) => {
    dispatch({ kind: 'snap-to-medoid', alpha: medoid });
    slider.setAlpha(state.alpha);
    debouncedEmbedding.cancel();
    void refreshEmbedding();
  },
);
slider.setAlpha(state.alpha);

uploadButton.addEventListener('click', () => {
  const target = targetFile.files?.[0];
  const background = backgroundFile.files?.[0];
  if (!target || !background) {
    showToast('choose target and background CSV files first', null);
    return;
  }
  client = new ApiClient(serverInput.value.replace(/\/$/, ''));
  uploadButton.disabled = true;
  client
    .uploadDatasets(target, background, labelsFile.files?.[0])
    .then((info) => {
      dispatch({ kind: 'server-version', version: info.version });
      datasetInfo.textContent =
        `${info.n} target + ${info.m} background points, ${info.d} features (v${info.version})`;
      hideToast();
      lastEmbedding = null;
      lastSweep = null;
      lastWeights = null;
      syncComponentChoices();
      void refreshSweep();
      void refreshEmbedding();
    })
    .catch((err) => report(err, null))
    .finally(() => {
      uploadButton.disabled = false;
    });
});

function applySweepParams(): void {
  const grid = {
    lo: Number(gridLo.value),
    hi: Number(gridHi.value),
    count: Number(gridCount.value),
  };
  dispatch({ kind: 'set-grid', grid });
  dispatch({ kind: 'set-k', k: Number(kInput.value) });
  dispatch({ kind: 'set-p', p: Number(pInput.value) });
  dispatch({ kind: 'set-seed', seed: Number(seedInput.value) });
  slider.setGrid(state.grid);
  slider.setAlpha(state.alpha);
  syncComponentChoices();
}

function syncComponentChoices(): void {
  const current = Number(componentSelect.value);
  componentSelect.replaceChildren();
  for (let c = 0; c < state.k; c++) {
    const option = document.createElement('option');
    option.value = String(c);
    option.textContent = `component ${c + 1}`;
    componentSelect.appendChild(option);
  }
  componentSelect.value = String(Math.min(current, state.k - 1));
}

sweepButton.addEventListener('click', () => {
  applySweepParams();
  void refreshSweep();
  void refreshEmbedding();
});

labelToggle.addEventListener('change', () => {
  dispatch({ kind: 'toggle-labels' });
  renderAll();
});

backgroundToggle.addEventListener('change', () => {
  dispatch({ kind: 'toggle-background' });
  void refreshEmbedding();
});

componentSelect.addEventListener('change', () => void refreshWeights());
expandWeights.addEventListener('change', () => renderAll());
snapshotButton.addEventListener('click', () => {
  downloadScatterPng(scatterCanvas, 'embedding.png');
});
toastRetry.addEventListener('click', () => {
  const retry = lastFailed;
  hideToast();
  retry?.();
});

labelToggle.checked = state.colorByLabel;
backgroundToggle.checked = state.overlayBackground;
syncComponentChoices();
renderAll();
