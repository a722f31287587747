import { afterEach, describe, expect, test, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { FeedbackForm } from "../src/views/feedback.js";
import { flush, jsonResponse, stubFetch } from "./helpers.js";

function setup(queryId: string | null = "q-fixture-1") {
  const container = document.createElement("div");
  document.body.append(container);
  new FeedbackForm(new ApiClient(), queryId).render(container);
  const textarea = container.querySelector<HTMLTextAreaElement>(".feedback-text")!;
  const send = container.querySelector<HTMLButtonElement>(".send-feedback")!;
  return { container, textarea, send };
}

function typeText(textarea: HTMLTextAreaElement, value: string) {
  textarea.value = value;
  textarea.dispatchEvent(new Event("input", { bubbles: true }));
}

afterEach(() => {
  vi.unstubAllGlobals();
  document.body.innerHTML = "";
});

describe("feedback view", () => {
  test("send is blocked while the text is empty", () => {
    stubFetch(() => jsonResponse({ id: "f1" }));
    const { textarea, send } = setup();
    expect(send.disabled).toBe(true);
    typeText(textarea, "   ");
    expect(send.disabled).toBe(true);
    typeText(textarea, "estimate matched the meter");
    expect(send.disabled).toBe(false);
  });

  test("successful send attaches the query id and actual fare", async () => {
    const fetchMock = stubFetch(() => jsonResponse({ id: "f1" }));
    const { container, textarea, send } = setup("q-42");
    typeText(textarea, "meter said 52");
    container.querySelector<HTMLInputElement>(".actual-fare")!.value = "52.00";
    send.click();
    await flush();

    const body = JSON.parse(String(fetchMock.mock.calls[0][1]?.body));
    expect(body).toEqual({ text: "meter said 52", actual_fare: 52, query_id: "q-42" });
    expect(container.querySelector(".feedback-status")!.textContent).toContain("recorded");
    expect(textarea.value).toBe("");
  });

  test("server failure shows a toast and keeps the text", async () => {
    stubFetch(() => jsonResponse({ detail: "disk full" }, 500));
    const { container, textarea, send } = setup();
    typeText(textarea, "important feedback");
    send.click();
    await flush();

    const status = container.querySelector(".feedback-status")!;
    expect(status.className).toContain("toast");
    expect(status.textContent).toContain("try again");
    expect(textarea.value).toBe("important feedback");
  });
});
