// Typed client for the explanation service. The UI never computes numbers:
// everything displayed is echoed from these payloads.

export interface SessionSummary {
  id: string;
  domain: string;
  status: string;
  objective: number;
  solution: Record<string, number>;
  agents: string[];
  history_length: number;
}

export interface SessionDetail extends SessionSummary {
  instance: Record<string, unknown>;
  history: HistoryEntry[];
}

export interface QuestionItem {
  variable: string;
  prompt: string;
  agents: string[];
}

export interface ExplanationEntryJson {
  var: string;
  agents: string[];
  contribution: number | string;
}

export interface RenderedTable {
  agents: string[];
  removed_label: string;
  added_label: string;
  removed: Record<string, { items: string[]; contribution: number | string }>;
  added: Record<string, { items: string[]; contribution: number | string }>;
  residual_note?: string;
}

export interface ExplanationJson {
  abstract: { quality_diff: number | string; direction: string };
  increases: ExplanationEntryJson[];
  decreases: ExplanationEntryJson[];
  per_agent: Record<string, { increases: ExplanationEntryJson[]; decreases: ExplanationEntryJson[] }>;
  residual_fg: number | string;
  length: number;
  suboptimality_ratio: number | null;
  rendered: { headline: string; table: RenderedTable; text: string };
}

export interface AskResponse {
  session: string;
  question: { variable: string; prompt: string };
  variant: string;
  weights: { alpha: number; beta: number };
  s_prime: Record<string, number>;
  explanation: ExplanationJson;
  metrics: { quality_diff: number | string; length: number; suboptimality_ratio: number | null };
  timings: { t_explain_s: number };
}

export interface HistoryEntry {
  question: { variable: string; prompt: string };
  variant: string;
  explanation: ExplanationJson;
  s_prime: Record<string, number>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "unknown";
  let message = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as { error?: string; message?: string };
    if (body.error) code = body.error;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body: keep the defaults
  }
  return new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  createSession(payload: Record<string, unknown>): Promise<SessionSummary> {
    return this.post("/sessions", payload);
  }

  getSession(id: string): Promise<SessionDetail> {
    return this.request(`/sessions/${id}`);
  }

  getQuestions(id: string): Promise<QuestionItem[]> {
    return this.request(`/sessions/${id}/questions`);
  }

  ask(
    id: string,
    body: { variable: string; variant?: string; alpha?: number; beta?: number },
  ): Promise<AskResponse> {
    return this.post(`/sessions/${id}/ask`, body);
  }
}
