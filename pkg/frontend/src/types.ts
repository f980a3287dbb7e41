/** Wire types mirroring the classification service's JSON payloads. */

export type SdgLabel = "strong" | "moderate" | "none";

export interface FosTag {
  fos_id: string;
  similarity: number;
}

export interface SdgScore {
  sdg: number;
  overlap_count: number;
  overlap_share: number;
  label: SdgLabel;
}

export interface Classification {
  input_digest: string;
  engine_version: string;
  fos_tags: FosTag[];
  scores: SdgScore[];
}

export type DoiStatus =
  | "ok"
  | "invalid_doi"
  | "not_found"
  | "no_abstract"
  | "transport";

export interface TagDoiItem {
  doi: string;
  status: DoiStatus;
  title?: string | null;
  classification?: Classification;
  error?: string;
}

export interface TagDoiResponse {
  results: TagDoiItem[];
}

export interface FeedbackRequest {
  input_digest: string;
  suggested_sdgs: number[];
  free_text?: string;
}

export interface FeedbackAck {
  record_id: number;
}
