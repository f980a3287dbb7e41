import type {
  Classification,
  FeedbackAck,
  FeedbackRequest,
  TagDoiResponse,
} from "./types.js";

/** Error carrying the HTTP status and the server's reason, when present. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface ApiClient {
  tagText(text: string): Promise<Classification>;
  tagDois(dois: string[]): Promise<TagDoiResponse>;
  submitFeedback(request: FeedbackRequest): Promise<FeedbackAck>;
}

/** Thin fetch wrapper around the service's JSON API. */
export class HttpApiClient implements ApiClient {
  constructor(
    private readonly baseUrl = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, `network error: ${String(err)}`);
    }
    if (!response.ok) {
      let reason = `HTTP ${response.status}`;
      try {
        const payload = (await response.json()) as { error?: string };
        if (payload.error) reason = payload.error;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, reason);
    }
    return (await response.json()) as T;
  }

  tagText(text: string): Promise<Classification> {
    return this.post<Classification>("/tag", { text });
  }

  tagDois(dois: string[]): Promise<TagDoiResponse> {
    return this.post<TagDoiResponse>("/tag-doi", { dois });
  }

  submitFeedback(request: FeedbackRequest): Promise<FeedbackAck> {
    return this.post<FeedbackAck>("/feedback", request);
  }
}

/**
 * API base URL resolution: a runtime config file next to the static assets
 * wins; otherwise requests go same-origin (the service serving the assets).
 */
export async function resolveBaseUrl(fetchFn: typeof fetch = fetch): Promise<string> {
  try {
    const response = await fetchFn("./config.json");
    if (!response.ok) return "";
    const config = (await response.json()) as { apiBaseUrl?: string };
    return config.apiBaseUrl ?? "";
  } catch {
    return "";
  }
}
