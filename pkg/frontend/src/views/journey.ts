import { ApiClient, ApiError, EstimateRequest } from "../api.js";
import { clear, el } from "../dom.js";
import type { City, ComparisonResponse, ResolvedPlace } from "../types.js";

const STATUS_MESSAGES: Record<number, string> = {
  400: "The request was rejected as invalid.",
  404: "Unknown city. Pick a city again.",
  422: "No route found between these points.",
  502: "The routing provider is unavailable. Try again shortly.",
};

interface EndpointField {
  root: HTMLElement;
  input: HTMLInputElement;
  resolved: ResolvedPlace | null;
}

/**
 * Journey query form: two geocoded endpoints (origin can also come from
 * device geolocation), optional time and surge override. Submit stays
 * disabled until both endpoints are resolved, and only one estimate request
 * is in flight at a time; resubmitting aborts the previous one.
 */
export class JourneyForm {
  private origin: EndpointField;
  private destination: EndpointField;
  private submitButton: HTMLButtonElement;
  private timeInput: HTMLInputElement;
  private surgeInput: HTMLInputElement;
  private errorBox: HTMLElement;
  private inflight: AbortController | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly city: City,
    private readonly onResult: (result: ComparisonResponse) => void,
  ) {
    this.origin = this.endpointField("origin", "Origin");
    this.destination = this.endpointField("destination", "Destination");
    this.timeInput = el("input", {
      type: "datetime-local",
      class: "time-input",
      "aria-label": "Journey time",
    });
    this.surgeInput = el("input", {
      type: "number",
      class: "surge-input",
      min: "1",
      step: "0.1",
      placeholder: "surge (optional)",
      "aria-label": "Surge multiplier",
    });
    this.submitButton = el("button", {
      class: "submit-estimate",
      disabled: "",
      text: city.button_label,
    });
    this.errorBox = el("div", { class: "form-error", role: "alert" });
    this.submitButton.addEventListener("click", () => void this.submit());
  }

  render(container: HTMLElement): void {
    clear(container);
    const locate = el("button", { class: "use-location", text: "Use my location" });
    locate.addEventListener("click", () => this.useGeolocation());
    this.origin.root.append(locate);
    container.append(
      el("h2", { text: this.city.display_name }),
      this.origin.root,
      this.destination.root,
      el("div", { class: "options" }, [this.timeInput, this.surgeInput]),
      this.submitButton,
      this.errorBox,
    );
  }

  private endpointField(kind: string, label: string): EndpointField {
    const input = el("input", {
      type: "text",
      class: `endpoint-input ${kind}`,
      placeholder: `${label} address`,
      "aria-label": label,
    });
    const suggestions = el("ul", { class: "suggestions" });
    const root = el("div", { class: `endpoint ${kind}` }, [input, suggestions]);
    const field: EndpointField = { root, input, resolved: null };

    input.addEventListener("input", () => {
      field.resolved = null; // editing invalidates the previous resolution
      this.refreshSubmitState();
      void this.showSuggestions(field, suggestions);
    });
    return field;
  }

  private async showSuggestions(field: EndpointField, list: HTMLElement): Promise<void> {
    const query = field.input.value.trim();
    clear(list);
    if (!query) return;
    let results;
    try {
      results = await this.api.geocode(this.city.code, query);
    } catch {
      return; // suggestions are best-effort; submit stays gated on resolution
    }
    if (field.input.value.trim() !== query) return; // stale response
    for (const place of results) {
      const item = el("li", { class: "suggestion", text: place.name });
      item.addEventListener("click", () => {
        field.resolved = { name: place.name, lat: place.lat, lng: place.lng };
        field.input.value = place.name;
        clear(list);
        this.refreshSubmitState();
      });
      list.append(item);
    }
  }

  private useGeolocation(): void {
    if (!navigator.geolocation) {
      this.showError("Geolocation unavailable; type the origin address instead.");
      return;
    }
    navigator.geolocation.getCurrentPosition(
      (position) => {
        const { latitude, longitude } = position.coords;
        this.origin.resolved = {
          name: `Current location (${latitude.toFixed(5)}, ${longitude.toFixed(5)})`,
          lat: latitude,
          lng: longitude,
        };
        this.origin.input.value = this.origin.resolved.name;
        this.refreshSubmitState();
      },
      () => {
        // permission denied: fall back to text geocoding
        this.showError("Location permission denied; type the origin address instead.");
      },
    );
  }

  private refreshSubmitState(): void {
    if (this.origin.resolved && this.destination.resolved) {
      this.submitButton.removeAttribute("disabled");
    } else {
      this.submitButton.setAttribute("disabled", "");
    }
  }

  private showError(message: string): void {
    this.errorBox.textContent = message;
  }

  async submit(): Promise<void> {
    if (!this.origin.resolved || !this.destination.resolved) return;
    this.showError("");
    this.inflight?.abort(); // only one estimate request at a time
    const controller = new AbortController();
    this.inflight = controller;

    const body: EstimateRequest = {
      city: this.city.code,
      origin: { lat: this.origin.resolved.lat, lng: this.origin.resolved.lng },
      destination: { lat: this.destination.resolved.lat, lng: this.destination.resolved.lng },
    };
    if (this.timeInput.value) body.time = this.timeInput.value;
    if (this.surgeInput.value) body.surge_multiplier = Number(this.surgeInput.value);

    try {
      const result = await this.api.estimate(body, controller.signal);
      if (controller.signal.aborted) return; // superseded by a newer submit
      if (this.inflight === controller) this.inflight = null;
      this.onResult(result);
    } catch (err) {
      if (controller.signal.aborted) return; // superseded by a newer submit
      if (this.inflight === controller) this.inflight = null;
      if (err instanceof ApiError) {
        this.showError(STATUS_MESSAGES[err.status] ?? `Request failed: ${err.detail}`);
      } else {
        this.showError("Service unreachable. Try again.");
      }
    }
  }
}
