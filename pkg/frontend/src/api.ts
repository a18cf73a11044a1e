// Typed client for the search service. Every UI state change goes through
// exactly one of these calls; no ranking or feedback math lives client-side.

export interface Candidate {
  concept_id: number;
  name: string;
  score: number;
  matched_terms: string[];
  context_boost: number;
}

export interface ExplainRow {
  concept_id: number;
  query_weight: number;
  video_weight: number;
  product: number;
}

export interface ResultRow {
  rank: number;
  video_id: string;
  similarity: number;
  explain: ExplainRow[];
  keyframe_url?: string;
  judged?: JudgmentLabel;
}

export interface HistoryEntry {
  iteration: number;
  video_ids: string[];
}

export type JudgmentLabel = "relevant" | "irrelevant";

export interface SessionCreated {
  session_id: string;
  language: string;
  candidates: Candidate[];
}

export interface RankedResponse {
  iteration: number;
  results: ResultRow[];
}

export interface SessionState {
  session_id: string;
  phase: "confirming_concepts" | "reviewing_results";
  iteration: number | null;
  query: { original: string; language: string; tokens: string[] };
  candidates: Candidate[];
  results: ResultRow[];
  history: HistoryEntry[];
  judged: Record<string, JudgmentLabel>;
}

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly ids: Array<string | number>;

  constructor(code: string, message: string, status: number, ids: Array<string | number> = []) {
    super(message);
    this.code = code;
    this.status = status;
    this.ids = ids;
  }

  /** Network failures and write conflicts are worth retrying as-is. */
  get retryable(): boolean {
    return this.code === "network" || this.code === "conflict";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function request<T>(fetchFn: FetchLike, url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetchFn(url, init);
  } catch {
    throw new ApiError("network", "service unreachable", 0);
  }
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    // fall through: missing body handled below
  }
  if (!response.ok) {
    const err = (body ?? {}) as { code?: string; message?: string; ids?: Array<string | number> };
    throw new ApiError(
      err.code ?? "http_error",
      err.message ?? `request failed with status ${response.status}`,
      response.status,
      err.ids ?? [],
    );
  }
  return body as T;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => globalThis.fetch(input, init),
  ) {}

  private post<T>(path: string, payload: unknown): Promise<T> {
    return request<T>(this.fetchFn, this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  createSession(text: string, lang?: string): Promise<SessionCreated> {
    return this.post("/sessions", lang ? { text, lang } : { text });
  }

  confirmConcepts(sessionId: string, conceptIds: number[]): Promise<RankedResponse> {
    return this.post(`/sessions/${sessionId}/confirm`, { concept_ids: conceptIds });
  }

  sendFeedback(
    sessionId: string,
    judgments: Array<{ video_id: string; label: JudgmentLabel }>,
  ): Promise<RankedResponse> {
    return this.post(`/sessions/${sessionId}/feedback`, { judgments });
  }

  getSession(sessionId: string): Promise<SessionState> {
    return request<SessionState>(this.fetchFn, `${this.baseUrl}/sessions/${sessionId}`);
  }

  getConcepts(): Promise<Array<{ concept_id: number; name: string }>> {
    return request(this.fetchFn, `${this.baseUrl}/concepts`);
  }
}
