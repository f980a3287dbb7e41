import { HttpApiClient, resolveBaseUrl, type ApiClient } from "./api.js";
import { buildFeedbackWidget } from "./feedback.js";
import { renderClassification, renderDoiItem, renderError } from "./render.js";

export type InputMode = "text" | "doi" | "doi_bulk";

const MODE_LABELS: Record<InputMode, string> = {
  text: "Text",
  doi: "DOI",
  doi_bulk: "Bulk DOIs",
};

const MODE_PLACEHOLDERS: Record<InputMode, string> = {
  text: "Paste an abstract or a short policy summary…",
  doi: "10.1234/example.doi",
  doi_bulk: "One DOI per line",
};

/**
 * Wire the single-page app into #app. One classification request may be in
 * flight at a time; the submit button stays disabled until it settles.
 */
export function initApp(doc: Document, api: ApiClient): void {
  const root = doc.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  root.textContent = "";

  let mode: InputMode = "text";
  let pending = false;

  const tabs = doc.createElement("nav");
  tabs.className = "tabs";
  const tabButtons = new Map<InputMode, HTMLButtonElement>();
  for (const candidate of ["text", "doi", "doi_bulk"] as InputMode[]) {
    const button = doc.createElement("button");
    button.type = "button";
    button.className = "tab";
    button.dataset.mode = candidate;
    button.textContent = MODE_LABELS[candidate];
    button.addEventListener("click", () => {
      mode = candidate;
      for (const [m, b] of tabButtons) {
        b.classList.toggle("tab-active", m === mode);
      }
      input.placeholder = MODE_PLACEHOLDERS[mode];
      formError.textContent = "";
    });
    tabButtons.set(candidate, button);
    tabs.appendChild(button);
  }
  tabButtons.get("text")!.classList.add("tab-active");
  root.appendChild(tabs);

  const form = doc.createElement("form");
  form.className = "input-form";
  const input = doc.createElement("textarea");
  input.id = "payload-input";
  input.placeholder = MODE_PLACEHOLDERS.text;
  form.appendChild(input);

  const submit = doc.createElement("button");
  submit.type = "submit";
  submit.id = "classify-submit";
  submit.textContent = "Classify";
  form.appendChild(submit);

  const formError = doc.createElement("p");
  formError.className = "form-error";
  form.appendChild(formError);
  root.appendChild(form);

  const results = doc.createElement("section");
  results.id = "results";
  root.appendChild(results);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (pending) return;
    const payload = input.value.trim();
    if (!payload) {
      formError.textContent = "Enter some text or a DOI first.";
      return;
    }
    formError.textContent = "";
    pending = true;
    submit.disabled = true;

    const settle = () => {
      pending = false;
      submit.disabled = false;
    };

    if (mode === "text") {
      api
        .tagText(payload)
        .then((classification) => {
          results.textContent = "";
          const card = renderClassification(doc, classification);
          card.appendChild(buildFeedbackWidget(doc, classification, api));
          results.appendChild(card);
        })
        .catch((err) => {
          results.textContent = "";
          results.appendChild(renderError(doc, `Classification failed: ${err.message}`));
        })
        .finally(settle);
      return;
    }

    const dois =
      mode === "doi"
        ? [payload]
        : payload
            .split("\n")
            .map((line) => line.trim())
            .filter((line) => line.length > 0);
    api
      .tagDois(dois)
      .then((response) => {
        results.textContent = "";
        for (const item of response.results) {
          const rendered = renderDoiItem(doc, item);
          if (item.status === "ok" && item.classification) {
            rendered
              .querySelector(".result-card")
              ?.appendChild(buildFeedbackWidget(doc, item.classification, api));
          }
          results.appendChild(rendered);
        }
      })
      .catch((err) => {
        results.textContent = "";
        results.appendChild(renderError(doc, `DOI tagging failed: ${err.message}`));
      })
      .finally(settle);
  });
}

// Browser bootstrap. Module scripts run after the document is parsed, so
// #app is present on the real page; test imports happen before any DOM is
// set up and fall through to calling initApp themselves.
if (typeof document !== "undefined" && document.getElementById("app")) {
  void resolveBaseUrl().then((baseUrl) => {
    initApp(document, new HttpApiClient(baseUrl));
  });
}
