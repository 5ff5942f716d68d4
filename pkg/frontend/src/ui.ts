// DOM rendering. One render(state) pass rewrites the app container; event
// handlers are wired to the session object passed in at mount time.

import { SessionFilter } from "./api.js";
import { QuizSession, SessionState } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document, tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderStartForm(doc: Document, session: QuizSession): HTMLElement {
  const form = el(doc, "form", "start-form");
  const select = el(doc, "select");
  select.id = "difficulty";
  for (const [value, label] of [["", "all riddles"], ["easy", "easy only"],
                                ["difficult", "difficult only"]]) {
    const option = el(doc, "option", undefined, label);
    option.value = value;
    select.appendChild(option);
  }
  const count = el(doc, "input");
  count.id = "count";
  count.type = "number";
  count.value = "10";
  count.min = "1";
  const button = el(doc, "button", "primary", "Start quiz");
  button.type = "submit";
  form.append(select, count, button);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const filter: SessionFilter = { count: parseInt(count.value, 10) || 10 };
    if (select.value) filter.difficulty = select.value as SessionFilter["difficulty"];
    void session.start(filter);
  });
  return form;
}

function renderProgress(doc: Document, state: SessionState): HTMLElement {
  const panel = el(doc, "section", "progress-panel");
  const p = state.progress;
  if (!p) return panel;
  panel.append(
    el(doc, "span", "stat solved-easy", `easy solved: ${p.solved.easy}`),
    el(doc, "span", "stat solved-difficult",
       `difficult solved: ${p.solved.difficult}`),
    el(doc, "span", "stat failed-easy", `easy failed: ${p.failed.easy}`),
    el(doc, "span", "stat failed-difficult",
       `difficult failed: ${p.failed.difficult}`),
    el(doc, "span", "stat hints-used", `hints used: ${p.hints_used}`),
    el(doc, "span", "stat completed", `progress: ${p.completed}/${p.total}`),
  );
  return panel;
}

function renderRiddle(doc: Document, state: SessionState,
                      session: QuizSession): HTMLElement {
  const card = el(doc, "section", "riddle-card");
  const riddle = state.riddle!;
  card.append(el(doc, "div", "riddle-kind",
                 `${riddle.kind.replace("_", " ")} · riddle ${riddle.position} of ${riddle.total}`));
  const lines = el(doc, "div", "riddle-lines");
  for (const line of riddle.lines) {
    lines.appendChild(el(doc, "p", "riddle-line", line));
  }
  lines.appendChild(el(doc, "p", "riddle-closing", riddle.closing));
  card.appendChild(lines);

  card.appendChild(el(doc, "div", "attempts",
                      `attempts left: ${riddle.attempts_left}`));

  if (state.issuedHints.length > 0) {
    const hints = el(doc, "div", "hints");
    hints.appendChild(el(doc, "div", "hints-title", "Hints so far"));
    for (const hint of state.issuedHints) {
      hints.appendChild(el(doc, "p", "hint", hint));
    }
    card.appendChild(hints);
  }

  const outcome = state.lastOutcome;
  if (outcome) {
    if (outcome.correct) {
      card.appendChild(el(doc, "div", "verdict correct", "Correct!"));
    } else if (state.revealedAnswer) {
      card.appendChild(el(doc, "div", "verdict revealed",
                          `Out of attempts. The answer was: ${state.revealedAnswer}`));
    } else {
      card.appendChild(el(doc, "div", "verdict wrong", "Not quite, try again."));
    }
  }

  const form = el(doc, "form", "guess-form");
  const input = el(doc, "input", "guess-input");
  input.id = "guess";
  input.type = "text";
  input.placeholder = "Who am I?";
  input.autocomplete = "off";
  const submit = el(doc, "button", "primary", "Guess");
  submit.type = "submit"; // submit-on-enter comes with the form
  form.append(input, submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const guess = input.value.trim();
    if (guess) {
      input.value = "";
      void session.submitGuess(guess);
    }
  });
  card.appendChild(form);

  if (riddle.kind !== "easy" && riddle.hints_available > 0) {
    const hintButton = el(doc, "button", "hint-button", "Ask for a hint");
    hintButton.type = "button";
    hintButton.addEventListener("click", () => void session.requestHint());
    card.appendChild(hintButton);
  }
  return card;
}

function renderDone(doc: Document, state: SessionState): HTMLElement {
  const card = el(doc, "section", "riddle-card done");
  card.appendChild(el(doc, "h2", undefined, "Quiz complete!"));
  const p = state.progress;
  if (p) {
    card.appendChild(el(doc, "p", "summary",
                        `You solved ${p.solved.easy + p.solved.difficult} of ${p.total} riddles`
                        + ` using ${p.hints_used} hints.`));
  }
  return card;
}

export function render(doc: Document, root: HTMLElement, state: SessionState,
                       session: QuizSession): void {
  root.textContent = "";
  root.appendChild(el(doc, "h1", "title", "Who am I?"));

  if (state.error) {
    root.appendChild(el(doc, "div", "error-banner", state.error));
  }
  if (state.notice) {
    root.appendChild(el(doc, "div", "notice-banner", state.notice));
  }
  if (!state.sessionId) {
    root.appendChild(renderStartForm(doc, session));
    return;
  }
  root.appendChild(renderProgress(doc, state));
  if (state.done) {
    root.appendChild(renderDone(doc, state));
  } else if (state.riddle) {
    root.appendChild(renderRiddle(doc, state, session));
  }
}

/** Wire a session to a container and keep the URL hash in sync so a hard
 * refresh restores the same session. */
export function mount(doc: Document, root: HTMLElement,
                      session: QuizSession): void {
  session.subscribe((state) => {
    if (state.sessionId) {
      const target = `#session=${state.sessionId}`;
      if (doc.defaultView && doc.defaultView.location.hash !== target) {
        doc.defaultView.location.hash = target;
      }
    }
    render(doc, root, state, session);
  });
}

export function sessionIdFromHash(hash: string): string | null {
  const match = /#session=([a-f0-9]+)/.exec(hash);
  return match ? match[1] : null;
}
