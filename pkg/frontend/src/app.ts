import { ApiClient } from "./api.js";
import { clear, el } from "./dom.js";
import type { City, ComparisonResponse } from "./types.js";
import { createCityPicker } from "./views/cities.js";
import { FeedbackForm } from "./views/feedback.js";
import { JourneyForm } from "./views/journey.js";
import { renderResult } from "./views/result.js";

export function startApp(root: HTMLElement, api: ApiClient = new ApiClient()): void {
  const pickerPane = el("section", { class: "pane picker-pane" });
  const formPane = el("section", { class: "pane form-pane" });
  const resultPane = el("section", { class: "pane result-pane" });
  const feedbackPane = el("section", { class: "pane feedback-pane" });
  clear(root);
  root.append(pickerPane, formPane, resultPane, feedbackPane);

  const onResult = (city: City) => (result: ComparisonResponse) => {
    renderResult(resultPane, result, city);
    new FeedbackForm(api, result.query_id).render(feedbackPane);
  };

  const onCitySelected = (city: City) => {
    clear(resultPane);
    clear(feedbackPane);
    new JourneyForm(api, city, onResult(city)).render(formPane);
  };

  void createCityPicker(api, onCitySelected).render(pickerPane);
}

// browser entry point; tests import startApp directly instead
if (typeof document !== "undefined" && document.getElementById("app")) {
  startApp(document.getElementById("app") as HTMLElement);
}
