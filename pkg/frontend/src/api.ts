import type { City, ComparisonResponse, GeocodeResult } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export interface EstimateRequest {
  city: string;
  origin: { lat: number; lng: number };
  destination: { lat: number; lng: number };
  time?: string;
  surge_multiplier?: number;
}

export interface FeedbackRequest {
  text: string;
  actual_fare?: number;
  query_id?: string;
}

async function parseError(resp: Response): Promise<ApiError> {
  let detail = resp.statusText;
  try {
    const body = await resp.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(resp.status, detail);
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  async getCities(): Promise<City[]> {
    const resp = await fetch(`${this.baseUrl}/api/v1/cities`);
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()).cities;
  }

  async geocode(city: string, q: string): Promise<GeocodeResult[]> {
    const params = new URLSearchParams({ city, q });
    const resp = await fetch(`${this.baseUrl}/api/v1/geocode?${params}`);
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()).results;
  }

  async estimate(body: EstimateRequest, signal?: AbortSignal): Promise<ComparisonResponse> {
    const resp = await fetch(`${this.baseUrl}/api/v1/estimate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
    if (!resp.ok) throw await parseError(resp);
    return resp.json();
  }

  async postFeedback(body: FeedbackRequest): Promise<{ id: string }> {
    const resp = await fetch(`${this.baseUrl}/api/v1/feedback`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) throw await parseError(resp);
    return resp.json();
  }
}
