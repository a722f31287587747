import { vi } from "vitest";

import type { City, ComparisonResponse } from "../src/types.js";

export const LONDON: City = {
  code: "london",
  display_name: "London",
  currency: "GBP",
  providers: {
    metered: { id: "black-cab", short_name: "Black", color: "#1f1f1f" },
    flex: { id: "uber-x", short_name: "Uber", color: "#ef3d81" },
  },
  button_label: "Uber or Black?",
};

export const NEW_YORK: City = {
  code: "new-york",
  display_name: "New York",
  currency: "USD",
  providers: {
    metered: { id: "yellow-cab", short_name: "Yellow", color: "#f7b500" },
    flex: { id: "uber-x", short_name: "Uber", color: "#ef3d81" },
  },
  button_label: "Uber or Yellow?",
};

export function comparisonFixture(overrides: Partial<ComparisonResponse> = {}): ComparisonResponse {
  return {
    query_id: "q-fixture-1",
    city: "london",
    currency: "GBP",
    submitted_at: "2016-02-09T12:00:00",
    origin: { lat: 51.5, lng: -0.12 },
    destination: { lat: 51.51, lng: -0.1 },
    estimates: [
      {
        provider: "black-cab",
        method: "meter",
        amount: "4.86",
        amount_minor: 486,
        currency: "GBP",
        corrected: true,
        surge_multiplier: 1,
      },
      {
        provider: "uber-x",
        method: "flex",
        amount: "5.00",
        amount_minor: 500,
        currency: "GBP",
        corrected: false,
        surge_multiplier: 1,
      },
    ],
    winner: "black-cab",
    savings: "0.14",
    savings_minor: 14,
    ...overrides,
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export type FetchHandler = (url: string, init?: RequestInit) => Response | Promise<Response>;

export function stubFetch(handler: FetchHandler) {
  const fn = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = typeof input === "string" ? input : input.toString();
    return handler(url, init);
  });
  vi.stubGlobal("fetch", fn);
  return fn;
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

/** jsdom normalizes css colors; compare through a scratch element. */
export function normalizeColor(value: string): string {
  const probe = document.createElement("div");
  probe.style.backgroundColor = value;
  return probe.style.backgroundColor;
}
