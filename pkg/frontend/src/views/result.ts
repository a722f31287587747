import { clear, el } from "../dom.js";
import type { City, ComparisonResponse } from "../types.js";

/**
 * Comparison result screen: a full-width header colored for the winning
 * provider, one row per estimate, and the savings line. Every number shown
 * is the service's string verbatim; this module does no arithmetic.
 */
export function providerColor(city: City, providerId: string): string {
  const { metered, flex } = city.providers;
  if (providerId === metered.id) return metered.color;
  if (providerId === flex.id) return flex.color;
  return "#666666";
}

export function providerShortName(city: City, providerId: string): string {
  const { metered, flex } = city.providers;
  if (providerId === metered.id) return metered.short_name;
  if (providerId === flex.id) return flex.short_name;
  return providerId;
}

export function renderResult(
  container: HTMLElement,
  result: ComparisonResponse,
  city: City,
): void {
  clear(container);

  const header = el("div", {
    class: "winner-header",
    "data-winner": result.winner,
    text: `${providerShortName(city, result.winner)} wins`,
  });
  header.style.backgroundColor = providerColor(city, result.winner);
  header.style.width = "100%";

  const rows = el("div", { class: "estimates" });
  for (const estimate of result.estimates) {
    const notes: string[] = [estimate.method];
    if (estimate.corrected) notes.push("corrected");
    if (estimate.surge_multiplier !== 1) notes.push(`surge x${estimate.surge_multiplier}`);
    rows.append(
      el("div", { class: "estimate-row", "data-provider": estimate.provider }, [
        el("span", { class: "provider-name", text: providerShortName(city, estimate.provider) }),
        el("span", { class: "amount", text: `${estimate.amount} ${estimate.currency}` }),
        el("span", { class: "notes", text: notes.join(", ") }),
      ]),
    );
  }

  const savings = el("div", { class: "savings", text: `Savings: ${result.savings} ${result.currency}` });

  container.append(header, rows, savings);
}
