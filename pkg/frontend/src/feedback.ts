import { ApiError, type ApiClient } from "./api.js";
import type { Classification } from "./types.js";

/**
 * Feedback widget: 17 toggleable SDG chips pre-seeded with the engine's
 * strong/moderate picks, a comment box, and a submit button that locks the
 * form after the first accepted POST so a rendered classification can send
 * at most one successful feedback record.
 */
export function buildFeedbackWidget(
  doc: Document,
  payload: Classification,
  api: ApiClient,
): HTMLElement {
  const widget = doc.createElement("form");
  widget.className = "feedback-widget";
  widget.dataset.state = "draft";

  const legend = doc.createElement("p");
  legend.className = "feedback-legend";
  legend.textContent = "Disagree? Select the SDGs you consider correct:";
  widget.appendChild(legend);

  const selected = new Set<number>(
    payload.scores.filter((s) => s.label !== "none").map((s) => s.sdg),
  );

  const chipRow = doc.createElement("div");
  chipRow.className = "chip-row";
  const chips = new Map<number, HTMLButtonElement>();
  for (const score of payload.scores) {
    const chip = doc.createElement("button");
    chip.type = "button";
    chip.className = "chip";
    chip.dataset.sdg = String(score.sdg);
    chip.textContent = String(score.sdg);
    setChip(chip, selected.has(score.sdg));
    chip.addEventListener("click", () => {
      if (widget.dataset.state !== "draft") return;
      if (selected.has(score.sdg)) {
        selected.delete(score.sdg);
        setChip(chip, false);
      } else {
        selected.add(score.sdg);
        setChip(chip, true);
      }
      submit.disabled = selected.size === 0;
    });
    chips.set(score.sdg, chip);
    chipRow.appendChild(chip);
  }
  widget.appendChild(chipRow);

  const comment = doc.createElement("textarea");
  comment.className = "feedback-comment";
  comment.placeholder = "Optional comment";
  widget.appendChild(comment);

  const submit = doc.createElement("button");
  submit.type = "submit";
  submit.className = "feedback-submit";
  submit.textContent = "Send feedback";
  submit.disabled = selected.size === 0;
  widget.appendChild(submit);

  const status = doc.createElement("p");
  status.className = "feedback-status";
  widget.appendChild(status);

  widget.addEventListener("submit", (event) => {
    event.preventDefault();
    if (widget.dataset.state !== "draft" || selected.size === 0) return;
    widget.dataset.state = "pending";
    submit.disabled = true;
    status.textContent = "Sending…";
    const request = {
      input_digest: payload.input_digest,
      suggested_sdgs: [...selected].sort((a, b) => a - b),
      ...(comment.value.trim() ? { free_text: comment.value.trim() } : {}),
    };
    api
      .submitFeedback(request)
      .then((ack) => {
        widget.dataset.state = "submitted";
        status.textContent = `Thanks — feedback recorded (#${ack.record_id}).`;
        comment.disabled = true;
        for (const chip of chips.values()) chip.disabled = true;
      })
      .catch((err) => {
        // Draft preserved; the user may retry.
        widget.dataset.state = "draft";
        submit.disabled = selected.size === 0;
        status.textContent =
          err instanceof ApiError
            ? `Feedback rejected: ${err.message}`
            : `Feedback failed: ${String(err)}`;
      });
  });

  return widget;
}

function setChip(chip: HTMLButtonElement, on: boolean): void {
  chip.dataset.selected = on ? "true" : "false";
  chip.classList.toggle("chip-selected", on);
}
