/** Typed client for the kbsearch service API. All UI traffic goes
 * through this module, so tests can verify only documented calls with
 * schema-valid bodies are issued. */

import type {
  ClusterRecord,
  CorpusStats,
  ItemRecord,
  ModelInfo,
  SearchRequest,
  SearchResponse,
} from './types.js';

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function errorMessage(resp: Response): Promise<string> {
  try {
    const body = (await resp.json()) as { error?: string };
    if (body && typeof body.error === 'string') return body.error;
  } catch {
    /* non-JSON error body */
  }
  return `request failed with status ${resp.status}`;
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = '', fetchFn: FetchLike = fetch) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
    this.fetchFn = fetchFn;
  }

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path);
    if (!resp.ok) throw new ApiError(resp.status, await errorMessage(resp));
    return (await resp.json()) as T;
  }

  async search(req: SearchRequest): Promise<SearchResponse> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/search`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(req),
    });
    if (!resp.ok) throw new ApiError(resp.status, await errorMessage(resp));
    return (await resp.json()) as SearchResponse;
  }

  getModels(): Promise<ModelInfo[]> {
    return this.getJson('/api/models');
  }

  getStats(): Promise<CorpusStats> {
    return this.getJson('/api/stats');
  }

  getItem(id: string): Promise<ItemRecord> {
    return this.getJson(`/api/items/${encodeURIComponent(id)}`);
  }

  getClusters(model: string, k: number): Promise<ClusterRecord[]> {
    const params = new URLSearchParams({ model, k: String(k) });
    return this.getJson(`/api/clusters?${params}`);
  }
}
