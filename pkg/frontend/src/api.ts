import type {
  CorpusStats,
  JobConfigBody,
  JobResource,
  JobState,
  SearchParams,
  SearchResponse,
  TablePayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `HTTP ${resp.status}`;
  try {
    const body = (await resp.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep defaults
  }
  return new ApiError(resp.status, code, message);
}

/** Typed client for the corpus service; the UI calls nothing else. */
export class Api {
  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  health(): Promise<{ status: string; version: string }> {
    return this.request("/health");
  }

  createJob(config: JobConfigBody): Promise<JobResource> {
    return this.request("/jobs", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(config),
    });
  }

  listJobs(): Promise<{ jobs: JobResource[] }> {
    return this.request("/jobs");
  }

  getJob(jobId: string): Promise<JobResource> {
    return this.request(`/jobs/${jobId}`);
  }

  progress(jobId: string): Promise<JobState> {
    return this.request(`/jobs/${jobId}/progress`);
  }

  pause(jobId: string): Promise<JobResource> {
    return this.request(`/jobs/${jobId}/pause`, { method: "POST" });
  }

  resume(jobId: string): Promise<JobResource> {
    return this.request(`/jobs/${jobId}/resume`, { method: "POST" });
  }

  stats(root?: string): Promise<CorpusStats> {
    const q = root ? `?root=${encodeURIComponent(root)}` : "";
    return this.request(`/corpus/stats${q}`);
  }

  search(params: SearchParams): Promise<SearchResponse> {
    const query = new URLSearchParams();
    for (const [key, value] of Object.entries(params)) {
      if (value !== undefined && value !== null && value !== "") {
        query.set(key, String(value));
      }
    }
    return this.request(`/corpus/search?${query.toString()}`);
  }

  table(pageId: number, offset: number, root?: string): Promise<TablePayload> {
    const q = root ? `?root=${encodeURIComponent(root)}` : "";
    return this.request(`/corpus/tables/${pageId}/${offset}${q}`);
  }

  tableCsvUrl(pageId: number, offset: number, root?: string): string {
    const q = root ? `?root=${encodeURIComponent(root)}` : "";
    return `${this.baseUrl}/corpus/tables/${pageId}/${offset}/csv${q}`;
  }
}
