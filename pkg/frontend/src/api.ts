/**
 * Typed client for the tutor API.
 *
 * All UI state derives from these response payloads; the client performs no
 * caching and no local mutation of anything the server returns.
 */

export interface Profile {
  demographic: string;
  proficiency: string;
  preferences: string;
  context: string;
}

export interface UsageBundle {
  definitions: string[];
  synonyms: string[];
  examples: string[];
  usage_patterns: [string, number][];
}

export interface VocabEntry {
  term: string;
  explanation: string;
  usage: UsageBundle;
}

export interface Feedback {
  feedback: string;
  criteria_used: string;
}

export interface TurnPayload {
  v: number;
  turn_index: number;
  stage: string;
  writing: string;
  question: string;
  vocab: VocabEntry[];
  feedback: Feedback | null;
  response: string;
}

export interface SessionPayload {
  v: number;
  session_id: string;
  created_at?: string;
  profile: Profile;
  turns: TurnPayload[];
}

/** Error envelope every non-2xx response carries. */
export class ApiFault extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly retryable: boolean,
  ) {
    super(message);
    this.name = "ApiFault";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function faultFromResponse(response: Response): Promise<ApiFault> {
  try {
    const body = (await response.json()) as { error?: { code: string; message: string; retryable: boolean } };
    if (body.error) {
      return new ApiFault(response.status, body.error.code, body.error.message, body.error.retryable);
    }
  } catch {
    // fall through to the generic fault
  }
  return new ApiFault(response.status, "Internal", `request failed (${response.status})`, response.status >= 500);
}

export class TutorApi {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch (cause) {
      throw new ApiFault(0, "NetworkError", `cannot reach the tutor service: ${cause}`, true);
    }
    if (!response.ok) {
      throw await faultFromResponse(response);
    }
    return (await response.json()) as T;
  }

  createSession(intakeText: string): Promise<{ v: number; session_id: string; profile: Profile }> {
    return this.request("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ intake_text: intakeText }),
    });
  }

  submitTurn(sessionId: string, writing: string, question: string): Promise<TurnPayload> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/turns`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ writing, question }),
    });
  }

  getSession(sessionId: string): Promise<SessionPayload> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}`);
  }

  healthz(): Promise<{ ok: boolean; backend_reachable: boolean }> {
    return this.request("/healthz");
  }
}

/**
 * Base URL resolution: an explicit global set at deploy time wins, then a
 * `?api=` query parameter (handy in development), then same-origin.
 */
export function resolveBaseUrl(win: { location: { search: string; origin: string } }): string {
  const fromGlobal = (globalThis as { EDU_API_BASE?: string }).EDU_API_BASE;
  if (fromGlobal) {
    return fromGlobal.replace(/\/$/, "");
  }
  const param = new URLSearchParams(win.location.search).get("api");
  if (param) {
    return param.replace(/\/$/, "");
  }
  return win.location.origin;
}
