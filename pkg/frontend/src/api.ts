/** Typed client for the annotation service JSON API. */

export interface SampleSummary {
  id: string;
  character: string;
  index: string;
  split: string;
  labeled: boolean;
  version: string;
  image_url: string;
}

export interface SamplePage {
  total: number;
  page: number;
  page_size: number;
  items: SampleSummary[];
}

export interface HistogramBin {
  label: string;
  lo: number;
  hi: number;
  count: number;
}

export interface Histogram {
  bins: HistogramBin[];
  total_classes: number;
  classes_le20_fraction: number;
  classes_lt5: number;
}

export interface Prediction {
  character: string;
  probability: number;
}

export interface ApiError {
  status: number;
  error: string;
  message: string;
}

export class ServiceError extends Error {
  constructor(public detail: ApiError) {
    super(detail.message);
  }

  get isConflict(): boolean {
    return this.detail.error === "conflicting_write";
  }
}

async function request<T>(baseUrl: string, path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(baseUrl + path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let detail: ApiError = { status: response.status, error: "unknown", message: response.statusText };
    try {
      const body = await response.json();
      detail = { status: response.status, error: body.error ?? "unknown", message: body.message ?? "" };
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ServiceError(detail);
  }
  return (await response.json()) as T;
}

export interface GalleryFilters {
  character?: string;
  unlabeled?: boolean;
  page?: number;
  pageSize?: number;
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  listSamples(filters: GalleryFilters = {}): Promise<SamplePage> {
    const params = new URLSearchParams();
    if (filters.character !== undefined) params.set("character", filters.character);
    if (filters.unlabeled !== undefined) params.set("unlabeled", String(filters.unlabeled));
    params.set("page", String(filters.page ?? 1));
    params.set("page_size", String(filters.pageSize ?? 50));
    return request<SamplePage>(this.baseUrl, `/api/samples?${params}`);
  }

  getSample(id: string): Promise<SampleSummary> {
    return request<SampleSummary>(this.baseUrl, `/api/samples/${encodeURIComponent(id)}`);
  }

  annotate(
    id: string,
    body: { character: string; index: string; editor: string; version: string },
  ): Promise<SampleSummary> {
    return request<SampleSummary>(this.baseUrl, `/api/samples/${encodeURIComponent(id)}/annotation`, {
      method: "PUT",
      body: JSON.stringify(body),
    });
  }

  histogram(): Promise<Histogram> {
    return request<Histogram>(this.baseUrl, "/api/stats/class-histogram");
  }

  models(): Promise<{ models: string[] }> {
    return request<{ models: string[] }>(this.baseUrl, "/api/models");
  }

  predict(sampleId: string, model: string, k: number): Promise<{ predictions: Prediction[] }> {
    return request<{ predictions: Prediction[] }>(this.baseUrl, "/api/predict", {
      method: "POST",
      body: JSON.stringify({ sample_id: sampleId, model, k }),
    });
  }
}
