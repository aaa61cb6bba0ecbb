import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';
import type { FetchLike } from '../src/api.js';

function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}

describe('ApiClient', () => {
  it('builds embedding queries with exact alpha round-trip', async () => {
    const urls: string[] = [];
    const fetchFn: FetchLike = async (url) => {
      urls.push(url);
      return jsonResponse({ ok: true });
    };
    const client = new ApiClient('http://host', fetchFn);
    const medoid = 8.886238162743403;
    await client.fetchEmbedding(medoid, 2, false);
    const query = new URL(urls[0]).searchParams;
    expect(Number(query.get('alpha'))).toBe(medoid); // bit-exact after parsing
    await client.fetchEmbedding('inf', 2, true);
    const second = new URL(urls[1]).searchParams;
    expect(second.get('alpha')).toBe('inf');
    expect(second.get('include_background')).toBe('1');
  });

  it('discards responses superseded by a newer request of the same class', async () => {
    let release: (() => void) | null = null;
    const slow = new Promise<void>((resolve) => {
      release = resolve;
    });
    let call = 0;
    const fetchFn: FetchLike = async (url) => {
      call += 1;
      if (call === 1) {
        await slow; // first request hangs until after the second resolves
        return jsonResponse({ tag: 'stale' });
      }
      return jsonResponse({ tag: 'fresh' });
    };
    const client = new ApiClient('http://host', fetchFn);
    const first = client.fetchEmbedding(1.0, 2, false);
    const second = client.fetchEmbedding(2.0, 2, false);
    expect(((await second) as { tag: string }).tag).toBe('fresh');
    release!();
    expect(await first).toBeNull(); // stale alpha discarded
  });

  it('keeps endpoint classes independent', async () => {
    const fetchFn: FetchLike = async (url) =>
      jsonResponse({ endpoint: new URL(url).pathname });
    const client = new ApiClient('http://host', fetchFn);
    const [embedding, sweep] = await Promise.all([
      client.fetchEmbedding(1.0, 2, false),
      client.fetchSweep({ lo: 0.1, hi: 1000, count: 40 }, 2, 3, 0),
    ]);
    expect((embedding as { endpoint: string }).endpoint).toBe('/embedding');
    expect((sweep as { endpoint: string }).endpoint).toBe('/sweep');
  });

  it('surfaces server error details as ApiError', async () => {
    const fetchFn: FetchLike = async () =>
      jsonResponse({ detail: 'no datasets uploaded' }, 409);
    const client = new ApiClient('http://host', fetchFn);
    await expect(client.fetchSweep({ lo: 0.1, hi: 10, count: 5 }, 2, 2, 0)).rejects.toThrow(
      'no datasets uploaded',
    );
    await expect(
      client.fetchSweep({ lo: 0.1, hi: 10, count: 5 }, 2, 2, 0),
    ).rejects.toBeInstanceOf(ApiError);
  });

  it('formats the sweep grid as lo:hi:count', async () => {
    const urls: string[] = [];
    const fetchFn: FetchLike = async (url) => {
      urls.push(url);
      return jsonResponse({});
    };
    const client = new ApiClient('http://host', fetchFn);
    await client.fetchSweep({ lo: 0.1, hi: 1000, count: 40 }, 2, 3, 7);
    const query = new URL(urls[0]).searchParams;
    expect(query.get('grid')).toBe('0.1:1000:40');
    expect(query.get('seed')).toBe('7');
  });
});
