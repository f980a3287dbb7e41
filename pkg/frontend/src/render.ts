import type { Classification, TagDoiItem } from "./types.js";

export const SDG_NAMES: ReadonlyMap<number, string> = new Map([
  [1, "No poverty"],
  [2, "Zero hunger"],
  [3, "Good health and well-being"],
  [4, "Quality education"],
  [5, "Gender equality"],
  [6, "Clean water and sanitation"],
  [7, "Affordable and clean energy"],
  [8, "Decent work and economic growth"],
  [9, "Industry, innovation and infrastructure"],
  [10, "Reduced inequalities"],
  [11, "Sustainable cities and communities"],
  [12, "Responsible consumption and production"],
  [13, "Climate action"],
  [14, "Life below water"],
  [15, "Life on land"],
  [16, "Peace, justice and strong institutions"],
  [17, "Partnerships for the goals"],
]);

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/**
 * Render the 17 SDG rows of one classification. Badge text is the payload's
 * label verbatim (capitalisation is purely CSS); nothing is recomputed from
 * the numeric scores.
 */
export function renderClassification(
  doc: Document,
  payload: Classification,
): HTMLElement {
  const card = el(doc, "article", "result-card");
  card.dataset.inputDigest = payload.input_digest;

  const meta = el(
    doc,
    "p",
    "result-meta",
    `engine ${payload.engine_version} · ${payload.fos_tags.length} FOS tags`,
  );
  card.appendChild(meta);

  if (payload.fos_tags.length > 0) {
    const tags = el(doc, "p", "fos-tags");
    tags.textContent =
      "FOS: " +
      payload.fos_tags
        .map((t) => `${t.fos_id} (${t.similarity.toFixed(3)})`)
        .join(", ");
    card.appendChild(tags);
  }

  const list = el(doc, "ul", "sdg-list");
  for (const score of payload.scores) {
    const row = el(doc, "li", "sdg-row");
    row.dataset.sdg = String(score.sdg);

    const name = SDG_NAMES.get(score.sdg) ?? "";
    row.appendChild(el(doc, "span", "sdg-name", `SDG ${score.sdg} — ${name}`));

    const badge = el(doc, "span", `badge badge-${score.label}`, score.label);
    badge.dataset.label = score.label;
    row.appendChild(badge);

    row.appendChild(
      el(
        doc,
        "span",
        "sdg-share",
        `${(score.overlap_share * 100).toFixed(1)}% (${score.overlap_count})`,
      ),
    );
    list.appendChild(row);
  }
  card.appendChild(list);
  return card;
}

/** Render one row of a bulk DOI response: a classification or its error. */
export function renderDoiItem(doc: Document, item: TagDoiItem): HTMLElement {
  const wrapper = el(doc, "section", "doi-item");
  wrapper.dataset.status = item.status;
  const heading = el(doc, "h3", "doi-heading", item.doi);
  wrapper.appendChild(heading);
  if (item.status === "ok" && item.classification) {
    if (item.title) {
      wrapper.appendChild(el(doc, "p", "doi-title", item.title));
    }
    wrapper.appendChild(renderClassification(doc, item.classification));
  } else {
    wrapper.appendChild(
      el(doc, "p", "doi-error", `${item.status}: ${item.error ?? "lookup failed"}`),
    );
  }
  return wrapper;
}

export function renderError(doc: Document, message: string): HTMLElement {
  return el(doc, "p", "inline-error", message);
}
