"""Quiz HTTP service: sessions, attempts, hints.

Play protocol: one attempt for easy riddles, three for difficult ones; a
wrong difficult guess with attempts remaining automatically issues the next
unissued hint (hints can also be requested explicitly, from the same
budget).  Responses never carry solutions or unissued hints; on final
failure the target is revealed (configurable).

Sessions live in memory and are optionally journaled to an append-only
JSONL file that is replayed at startup, so a restart loses nothing.
"""

from __future__ import annotations

import json
import random
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .generate import KIND_EASY, Riddle
from .validate import verify_answer

API_VERSION = 1
ATTEMPTS_EASY = 1
ATTEMPTS_DIFFICULT = 3


class QuizError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def max_attempts(kind: str) -> int:
    return ATTEMPTS_EASY if kind == KIND_EASY else ATTEMPTS_DIFFICULT


@dataclass
class HistoryEntry:
    riddle_id: str
    guesses: list[str] = field(default_factory=list)
    outcome: str = "open"  # open | solved | failed
    hints_used: int = 0


@dataclass
class QuizSession:
    session_id: str
    riddle_queue: list[str]
    current_index: int = 0
    attempts_used: int = 0
    hints_issued: int = 0
    history: list[HistoryEntry] = field(default_factory=list)

    @property
    def done(self) -> bool:
        return self.current_index >= len(self.riddle_queue)

    def current_riddle_id(self) -> str:
        return self.riddle_queue[self.current_index]

    def open_entry(self) -> HistoryEntry:
        if not self.history or self.history[-1].outcome != "open" \
                or self.history[-1].riddle_id != self.current_riddle_id():
            self.history.append(HistoryEntry(riddle_id=self.current_riddle_id()))
        return self.history[-1]


class QuizService:
    """Session state machine over a read-only riddle set."""

    def __init__(self, riddles: list[Riddle],
                 aliases: Optional[dict[str, str]] = None,
                 journal_path: Optional[str | Path] = None,
                 reveal_on_failure: bool = True,
                 default_seed: int = 0):
        self.riddles = {r.id: r for r in riddles}
        self.order = [r.id for r in riddles]
        self.aliases = aliases or {}
        self.reveal_on_failure = reveal_on_failure
        self.default_seed = default_seed
        self.sessions: dict[str, QuizSession] = {}
        self._lock = threading.Lock()
        self._journal_path = Path(journal_path) if journal_path else None
        self._replaying = False
        if self._journal_path and self._journal_path.exists():
            self._replay_journal()

    # -- journaling ---------------------------------------------------------

    def _journal(self, event: dict) -> None:
        if self._journal_path is None or self._replaying:
            return
        with self._journal_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")

    def _replay_journal(self) -> None:
        self._replaying = True
        try:
            with self._journal_path.open(encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    event = json.loads(line)
                    kind = event["event"]
                    try:
                        if kind == "session":
                            self._restore_session(event["session_id"], event["queue"])
                        elif kind == "guess":
                            self.submit_answer(event["session_id"], event["guess"])
                        elif kind == "hint":
                            self.request_hint(event["session_id"])
                    except QuizError:
                        continue  # riddle set changed under the journal
        finally:
            self._replaying = False

    def _restore_session(self, session_id: str, queue: list[str]) -> None:
        queue = [rid for rid in queue if rid in self.riddles]
        self.sessions[session_id] = QuizSession(session_id=session_id,
                                                riddle_queue=queue)

    # -- core operations ----------------------------------------------------

    def _filtered_ids(self, difficulty: Optional[str], concept: Optional[str]
                      ) -> list[str]:
        ids = []
        for rid in self.order:
            riddle = self.riddles[rid]
            if difficulty:
                if difficulty == "easy" and riddle.kind != KIND_EASY:
                    continue
                if difficulty == "difficult" and not riddle.is_difficult:
                    continue
                if difficulty not in ("easy", "difficult") and riddle.kind != difficulty:
                    continue
            if concept and riddle.concept_id != concept:
                continue
            ids.append(rid)
        return ids

    def create_session(self, difficulty: Optional[str] = None,
                       concept: Optional[str] = None,
                       count: Optional[int] = None,
                       seed: Optional[int] = None) -> str:
        ids = self._filtered_ids(difficulty, concept)
        if not ids:
            raise QuizError(422, "empty_filter", "no riddles match the filter")
        rng = random.Random(self.default_seed if seed is None else seed)
        rng.shuffle(ids)
        if count is not None:
            if count < 1:
                raise QuizError(422, "empty_filter", "count must be >= 1")
            ids = ids[:count]
        session_id = uuid.uuid4().hex
        with self._lock:
            self.sessions[session_id] = QuizSession(session_id=session_id,
                                                    riddle_queue=ids)
        self._journal({"event": "session", "session_id": session_id, "queue": ids})
        return session_id

    def _session(self, session_id: str) -> QuizSession:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise QuizError(404, "unknown_session",
                            f"no session {session_id}") from None

    def riddle_view(self, session_id: str) -> dict:
        """Redacted view of the current riddle, or a terminal summary."""
        session = self._session(session_id)
        if session.done:
            return {"done": True, "riddle": None,
                    "progress": self._progress(session)}
        riddle = self.riddles[session.current_riddle_id()]
        return {
            "done": False,
            "riddle": {
                "riddle_id": riddle.id,
                "kind": riddle.kind,
                "lines": riddle.lines(),
                "closing": riddle.closing,
                "attempts_left": max_attempts(riddle.kind) - session.attempts_used,
                "hints_available": len(riddle.hints) - session.hints_issued,
                "issued_hints": list(riddle.hints[:session.hints_issued]),
                "position": session.current_index + 1,
                "total": len(session.riddle_queue),
            },
            "progress": self._progress(session),
        }

    def _advance(self, session: QuizSession) -> None:
        session.current_index += 1
        session.attempts_used = 0
        session.hints_issued = 0

    def submit_answer(self, session_id: str, guess: str) -> dict:
        session = self._session(session_id)
        if session.done:
            raise QuizError(409, "session_complete",
                            "the session has no riddles left")
        if not guess or not guess.strip():
            raise QuizError(400, "invalid_guess", "guess must be non-empty")
        with self._lock:
            riddle = self.riddles[session.current_riddle_id()]
            entry = session.open_entry()
            self._journal({"event": "guess", "session_id": session_id,
                           "guess": guess})
            correct, matched = verify_answer(guess, list(riddle.solutions),
                                             self.aliases)
            session.attempts_used += 1
            entry.guesses.append(guess)
            attempts_left = max_attempts(riddle.kind) - session.attempts_used
            outcome: dict = {"correct": correct, "attempts_left": attempts_left,
                             "hint": None, "revealed_answer": None}
            if correct:
                entry.outcome = "solved"
                self._advance(session)
            elif attempts_left > 0:
                if riddle.is_difficult and session.hints_issued < len(riddle.hints):
                    outcome["hint"] = riddle.hints[session.hints_issued]
                    session.hints_issued += 1
                    entry.hints_used += 1
            else:
                entry.outcome = "failed"
                if self.reveal_on_failure:
                    outcome["revealed_answer"] = riddle.concept_id
                self._advance(session)
            return outcome

    def request_hint(self, session_id: str) -> dict:
        session = self._session(session_id)
        if session.done:
            raise QuizError(409, "session_complete",
                            "the session has no riddles left")
        with self._lock:
            riddle = self.riddles[session.current_riddle_id()]
            if not riddle.is_difficult:
                raise QuizError(409, "hint_budget_exhausted",
                                "easy riddles have no hints")
            if session.hints_issued >= len(riddle.hints):
                raise QuizError(409, "hint_budget_exhausted",
                                "no hints left for this riddle")
            hint = riddle.hints[session.hints_issued]
            session.hints_issued += 1
            session.open_entry().hints_used += 1
            self._journal({"event": "hint", "session_id": session_id})
            return {"hint": hint}

    def _progress(self, session: QuizSession) -> dict:
        solved = {"easy": 0, "difficult": 0}
        failed = {"easy": 0, "difficult": 0}
        hints_used = 0
        for entry in session.history:
            riddle = self.riddles[entry.riddle_id]
            bucket = "easy" if riddle.kind == KIND_EASY else "difficult"
            if entry.outcome == "solved":
                solved[bucket] += 1
            elif entry.outcome == "failed":
                failed[bucket] += 1
            hints_used += entry.hints_used
        return {
            "total": len(session.riddle_queue),
            "completed": session.current_index,
            "solved": solved,
            "failed": failed,
            "hints_used": hints_used,
            "done": session.done,
            "history": [
                {"riddle_id": e.riddle_id, "guesses": list(e.guesses),
                 "outcome": e.outcome, "hints_used": e.hints_used}
                for e in session.history
            ],
        }

    def progress(self, session_id: str) -> dict:
        return self._progress(self._session(session_id))

    def browse(self, difficulty: Optional[str], concept: Optional[str]) -> list[dict]:
        """Redacted riddle listing; never includes targets or solutions."""
        return [
            {
                "riddle_id": rid,
                "kind": self.riddles[rid].kind,
                "lines": self.riddles[rid].lines(),
                "closing": self.riddles[rid].closing,
                "hint_count": len(self.riddles[rid].hints),
            }
            for rid in self._filtered_ids(difficulty, concept)
        ]


# -- HTTP layer --------------------------------------------------------------

class SessionFilter(BaseModel):
    difficulty: Optional[str] = None
    concept: Optional[str] = None
    count: Optional[int] = None
    seed: Optional[int] = None


class CreateSessionRequest(BaseModel):
    filter: SessionFilter = SessionFilter()


class AnswerRequest(BaseModel):
    guess: str


def _ok(payload: dict, status: int = 200) -> JSONResponse:
    return JSONResponse({**payload, "api_version": API_VERSION}, status_code=status)


def create_app(service: QuizService,
               static_dir: Optional[str | Path] = None) -> FastAPI:
    app = FastAPI(title="riddleforge quiz service")

    @app.exception_handler(QuizError)
    async def quiz_error_handler(_request, exc: QuizError):
        return _ok({"error": {"code": exc.code, "message": exc.message}},
                   status=exc.status)

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(_request, exc: RequestValidationError):
        return _ok({"error": {"code": "invalid_request", "message": str(exc.errors())}},
                   status=400)

    @app.get("/health")
    def health():
        return _ok({"status": "ok", "riddles": len(service.riddles)})

    @app.post("/sessions")
    def create_session(request: CreateSessionRequest):
        f = request.filter
        session_id = service.create_session(f.difficulty, f.concept,
                                            f.count, f.seed)
        return _ok({"session_id": session_id}, status=201)

    @app.get("/sessions/{session_id}/riddle")
    def get_riddle(session_id: str):
        return _ok(service.riddle_view(session_id))

    @app.post("/sessions/{session_id}/answer")
    def submit_answer(session_id: str, request: AnswerRequest):
        return _ok(service.submit_answer(session_id, request.guess))

    @app.post("/sessions/{session_id}/hint")
    def request_hint(session_id: str):
        return _ok(service.request_hint(session_id))

    @app.get("/sessions/{session_id}/progress")
    def progress(session_id: str):
        return _ok(service.progress(session_id))

    @app.get("/riddles")
    def browse(difficulty: Optional[str] = None, concept: Optional[str] = None):
        return _ok({"riddles": service.browse(difficulty, concept)})

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="ui")
    return app
