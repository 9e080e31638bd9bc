import type {
  GalleryEntry,
  JobRequestBody,
  JobStatus,
  SearchResponse,
} from './types';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

/** Thin client for the palette service. All color math stays server-side. */
export class ApiClient {
  constructor(private readonly baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, '');
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.baseUrl + path, init);
    if (!res.ok) {
      let detail = res.statusText;
      try {
        const body = await res.json();
        if (body && typeof body.detail === 'string') detail = body.detail;
      } catch {
        // non-JSON error body, keep statusText
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  async submitJob(body: JobRequestBody): Promise<string> {
    const data = await this.request<{ job_id: string }>('/jobs', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
    return data.job_id;
  }

  getJob(jobId: string): Promise<JobStatus> {
    return this.request<JobStatus>(`/jobs/${encodeURIComponent(jobId)}`);
  }

  async search(
    q: string,
    opts: { style?: string; offset?: number; limit?: number } = {},
  ): Promise<GalleryEntry[]> {
    const params = new URLSearchParams({ q });
    if (opts.style) params.set('style', opts.style);
    if (opts.offset !== undefined) params.set('offset', String(opts.offset));
    if (opts.limit !== undefined) params.set('limit', String(opts.limit));
    const data = await this.request<SearchResponse>(`/search?${params}`);
    return data.results;
  }

  getEntry(entryId: string): Promise<GalleryEntry> {
    return this.request<GalleryEntry>(`/entries/${encodeURIComponent(entryId)}`);
  }

  /** Server-rendered glyph SVG; never redrawn client-side. */
  async getGlyphSvg(entryId: string, rank = 0): Promise<string> {
    const res = await fetch(
      `${this.baseUrl}/entries/${encodeURIComponent(entryId)}/glyph.svg?rank=${rank}`,
    );
    if (!res.ok) throw new ApiError(res.status, res.statusText);
    return res.text();
  }
}
