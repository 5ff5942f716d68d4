// Typed client for the quiz JSON API. Every adjudication decision comes
// from the server; the client never checks answers locally.

export interface SessionFilter {
  difficulty?: "easy" | "difficult" | "difficult_v1" | "difficult_v2";
  concept?: string;
  count?: number;
  seed?: number;
}

export interface RiddleView {
  riddle_id: string;
  kind: string;
  lines: string[];
  closing: string;
  attempts_left: number;
  hints_available: number;
  issued_hints: string[];
  position: number;
  total: number;
}

export interface ProgressCounts {
  easy: number;
  difficult: number;
}

export interface Progress {
  total: number;
  completed: number;
  solved: ProgressCounts;
  failed: ProgressCounts;
  hints_used: number;
  done: boolean;
  history: {
    riddle_id: string;
    guesses: string[];
    outcome: string;
    hints_used: number;
  }[];
}

export interface RiddleResponse {
  done: boolean;
  riddle: RiddleView | null;
  progress: Progress;
}

export interface AttemptOutcome {
  correct: boolean;
  attempts_left: number;
  hint: string | null;
  revealed_answer: string | null;
}

export class ApiError extends Error {
  constructor(public code: string, message: string, public status: number) {
    super(message);
  }
}

async function parse<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok || body.error) {
    const err = body.error ?? { code: "http_error", message: response.statusText };
    throw new ApiError(err.code, err.message, response.status);
  }
  return body as T;
}

export class QuizApi {
  constructor(private baseUrl: string = "", private fetchFn: typeof fetch = fetch) {}

  private async get<T>(path: string): Promise<T> {
    return parse<T>(await this.fetchFn(this.baseUrl + path));
  }

  private async post<T>(path: string, payload?: unknown): Promise<T> {
    return parse<T>(await this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload ?? {}),
    }));
  }

  createSession(filter: SessionFilter): Promise<{ session_id: string }> {
    return this.post("/sessions", { filter });
  }

  currentRiddle(sessionId: string): Promise<RiddleResponse> {
    return this.get(`/sessions/${sessionId}/riddle`);
  }

  submitAnswer(sessionId: string, guess: string): Promise<AttemptOutcome> {
    return this.post(`/sessions/${sessionId}/answer`, { guess });
  }

  requestHint(sessionId: string): Promise<{ hint: string }> {
    return this.post(`/sessions/${sessionId}/hint`);
  }

  progress(sessionId: string): Promise<Progress> {
    return this.get(`/sessions/${sessionId}/progress`);
  }
}
