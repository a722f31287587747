import { ApiClient } from "../api.js";
import { clear, el } from "../dom.js";

/**
 * Feedback form tied to a comparison: free text, optional actual fare.
 * The query id of the estimate being commented on is attached automatically.
 * Failures keep the text so nothing typed is lost.
 */
export class FeedbackForm {
  private textarea: HTMLTextAreaElement;
  private fareInput: HTMLInputElement;
  private sendButton: HTMLButtonElement;
  private status: HTMLElement;

  constructor(
    private readonly api: ApiClient,
    private readonly queryId: string | null,
  ) {
    this.textarea = el("textarea", {
      class: "feedback-text",
      placeholder: "How did the estimate compare to the meter?",
      "aria-label": "Feedback",
    });
    this.fareInput = el("input", {
      type: "number",
      class: "actual-fare",
      min: "0",
      step: "0.01",
      placeholder: "actual fare (optional)",
      "aria-label": "Actual fare",
    });
    this.sendButton = el("button", { class: "send-feedback", disabled: "", text: "Send feedback" });
    this.status = el("div", { class: "feedback-status", role: "status" });

    this.textarea.addEventListener("input", () => this.refreshSendState());
    this.sendButton.addEventListener("click", () => void this.send());
  }

  render(container: HTMLElement): void {
    clear(container);
    container.append(
      el("h3", { text: "Feedback" }),
      this.textarea,
      this.fareInput,
      this.sendButton,
      this.status,
    );
  }

  private refreshSendState(): void {
    if (this.textarea.value.trim()) {
      this.sendButton.removeAttribute("disabled");
    } else {
      this.sendButton.setAttribute("disabled", "");
    }
  }

  async send(): Promise<void> {
    const text = this.textarea.value.trim();
    if (!text) return;
    const body: { text: string; actual_fare?: number; query_id?: string } = { text };
    const fare = this.fareInput.value.trim();
    if (fare) body.actual_fare = Number(fare);
    if (this.queryId) body.query_id = this.queryId;

    try {
      await this.api.postFeedback(body);
      this.status.textContent = "Thanks, feedback recorded.";
      this.status.className = "feedback-status ok";
      this.textarea.value = "";
      this.refreshSendState();
    } catch {
      // keep the text so the user can retry
      this.status.textContent = "Could not send feedback. Your text is kept; try again.";
      this.status.className = "feedback-status error toast";
    }
  }
}
