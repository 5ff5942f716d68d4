// Session state machine. State is derived solely from API responses, so a
// hard refresh can rebuild everything from the session id alone.

import {
  ApiError,
  AttemptOutcome,
  Progress,
  QuizApi,
  RiddleView,
  SessionFilter,
} from "./api.js";

export interface SessionState {
  sessionId: string | null;
  riddle: RiddleView | null;
  progress: Progress | null;
  done: boolean;
  issuedHints: string[];
  lastOutcome: AttemptOutcome | null;
  revealedAnswer: string | null;
  error: string | null;
  notice: string | null;
}

export function emptyState(): SessionState {
  return {
    sessionId: null,
    riddle: null,
    progress: null,
    done: false,
    issuedHints: [],
    lastOutcome: null,
    revealedAnswer: null,
    error: null,
    notice: null,
  };
}

export type Listener = (state: SessionState) => void;

export class QuizSession {
  private state: SessionState = emptyState();
  private listeners: Listener[] = [];

  constructor(private api: QuizApi) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
    listener(this.state);
  }

  current(): SessionState {
    return this.state;
  }

  private emit(patch: Partial<SessionState>): SessionState {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
    return this.state;
  }

  private async fail<T>(work: () => Promise<T>): Promise<T | null> {
    try {
      const result = await work();
      return result;
    } catch (err) {
      const message = err instanceof ApiError ? err.message : String(err);
      this.emit({ error: message });
      return null;
    }
  }

  /** Create a session and load its first riddle. */
  async start(filter: SessionFilter): Promise<SessionState> {
    await this.fail(async () => {
      const { session_id } = await this.api.createSession(filter);
      this.state = { ...emptyState(), sessionId: session_id };
      await this.refresh();
    });
    return this.state;
  }

  /** Rebuild state for an existing session (e.g. after a page reload).
   * The server serializes concurrent tabs, but they share one attempt
   * budget, so the UI warns about it. */
  async resume(sessionId: string): Promise<SessionState> {
    this.state = {
      ...emptyState(),
      sessionId,
      notice: "Resumed session: attempts and hints are shared with any other open tab.",
    };
    await this.fail(() => this.refresh());
    return this.state;
  }

  /** Pull the redacted riddle view and progress from the server. */
  async refresh(): Promise<SessionState> {
    const sessionId = this.state.sessionId;
    if (!sessionId) return this.state;
    const view = await this.api.currentRiddle(sessionId);
    return this.emit({
      riddle: view.riddle,
      progress: view.progress,
      done: view.done,
      issuedHints: view.riddle ? view.riddle.issued_hints : [],
      error: null,
    });
  }

  /** Submit a guess; the server adjudicates and may hand back a hint. */
  async submitGuess(guess: string): Promise<SessionState> {
    const sessionId = this.state.sessionId;
    if (!sessionId || !guess.trim()) return this.state;
    await this.fail(async () => {
      const outcome = await this.api.submitAnswer(sessionId, guess);
      const issuedHints = outcome.hint
        ? [...this.state.issuedHints, outcome.hint]
        : this.state.issuedHints;
      this.emit({
        lastOutcome: outcome,
        issuedHints,
        revealedAnswer: outcome.revealed_answer,
        error: null,
      });
      if (outcome.correct || outcome.attempts_left === 0) {
        await this.refresh(); // resolved: advance to the next riddle
      } else {
        const view = await this.api.currentRiddle(sessionId);
        this.emit({ riddle: view.riddle, progress: view.progress });
      }
    });
    return this.state;
  }

  /** Ask for a hint explicitly (shares the budget with auto-issued ones). */
  async requestHint(): Promise<SessionState> {
    const sessionId = this.state.sessionId;
    if (!sessionId) return this.state;
    await this.fail(async () => {
      const { hint } = await this.api.requestHint(sessionId);
      this.emit({ issuedHints: [...this.state.issuedHints, hint], error: null });
      const view = await this.api.currentRiddle(sessionId);
      this.emit({ riddle: view.riddle, progress: view.progress });
    });
    return this.state;
  }
}
