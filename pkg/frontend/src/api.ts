/**
 * Typed client for the explorer service. One in-flight request per endpoint
 * class: a newer request aborts the previous one, and responses arriving
 * for superseded requests resolve to null instead of reaching the view.
 */

import type {
  AlphaValue,
  DatasetInfo,
  EmbeddingResponse,
  SweepResponse,
  WeightsResponse,
} from './types.js';
import { alphaParam, gridParam } from './types.js';
import type { GridSpec } from './types.js';

type EndpointClass = 'embedding' | 'sweep' | 'weights';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

export class ApiClient {
  private tokens: Record<EndpointClass, number> = { embedding: 0, sweep: 0, weights: 0 };
  private controllers: Partial<Record<EndpointClass, AbortController>> = {};

  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async uploadDatasets(target: Blob, background: Blob, labels?: Blob): Promise<DatasetInfo> {
    const form = new FormData();
    form.append('target', target, 'target.csv');
    form.append('background', background, 'background.csv');
    if (labels) form.append('labels', labels, 'labels.csv');
    const response = await this.fetchFn(`${this.baseUrl}/datasets`, {
      method: 'POST',
      body: form,
    });
    if (!response.ok) throw new ApiError(response.status, await detailOf(response));
    return (await response.json()) as DatasetInfo;
  }

  /**
   * GET one endpoint; resolves null when a newer request of the same class
   * was issued before this one came back (the stale-alpha discard).
   */
  private async getLatest<T>(endpoint: EndpointClass, query: string): Promise<T | null> {
    const token = ++this.tokens[endpoint];
    this.controllers[endpoint]?.abort();
    const controller = typeof AbortController !== 'undefined' ? new AbortController() : undefined;
    if (controller) this.controllers[endpoint] = controller;
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}/${endpoint}?${query}`, {
        signal: controller?.signal,
      });
    } catch (err) {
      if ((err as Error).name === 'AbortError') return null;
      throw err;
    }
    if (token !== this.tokens[endpoint]) return null; // superseded while in flight
    if (!response.ok) throw new ApiError(response.status, await detailOf(response));
    return (await response.json()) as T;
  }

  fetchEmbedding(
    alpha: AlphaValue,
    k: number,
    includeBackground: boolean,
  ): Promise<EmbeddingResponse | null> {
    const params = new URLSearchParams({ alpha: alphaParam(alpha), k: String(k) });
    if (includeBackground) params.set('include_background', '1');
    return this.getLatest<EmbeddingResponse>('embedding', params.toString());
  }

  fetchSweep(grid: GridSpec, k: number, p: number, seed: number): Promise<SweepResponse | null> {
    const params = new URLSearchParams({
      grid: gridParam(grid),
      k: String(k),
      p: String(p),
      seed: String(seed),
    });
    return this.getLatest<SweepResponse>('sweep', params.toString());
  }

  fetchWeights(alpha: AlphaValue, component: number, k: number): Promise<WeightsResponse | null> {
    const params = new URLSearchParams({
      alpha: alphaParam(alpha),
      component: String(component),
      k: String(k),
    });
    return this.getLatest<WeightsResponse>('weights', params.toString());
  }
}

async function detailOf(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: string };
    return body.detail ?? `HTTP ${response.status}`;
  } catch {
    return `HTTP ${response.status}`;
  }
}
