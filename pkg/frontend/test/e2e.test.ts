// End-to-end flow against the live service started by serve-fixture.ts:
// drive the real DOM app, answer an easy riddle, fail a difficult one
// twice collecting two distinct hints, and check the rendered progress
// against GET /progress verbatim.

import { beforeEach, describe, expect, inject, it } from "vitest";

import { QuizApi } from "../src/api.js";
import { QuizSession } from "../src/state.js";
import { mount, render } from "../src/ui.js";

const baseUrl = inject("baseUrl");

function freshApp(): { root: HTMLElement; session: QuizSession } {
  document.body.innerHTML = '<main id="app"></main>';
  const root = document.getElementById("app") as HTMLElement;
  const session = new QuizSession(new QuizApi(baseUrl));
  mount(document, root, session);
  return { root, session };
}

function text(root: HTMLElement, selector: string): string {
  const node = root.querySelector(selector);
  return node?.textContent ?? "";
}

function statNumber(root: HTMLElement, cls: string): number {
  const raw = text(root, `.stat.${cls}`);
  return parseInt(raw.split(":").pop() ?? "-1", 10);
}

describe("quiz UI against the live service", () => {
  beforeEach(() => {
    window.location.hash = "";
  });

  it("serves the built bundle at /", async () => {
    const response = await fetch(`${baseUrl}/`);
    expect(response.status).toBe(200);
    const html = await response.text();
    expect(html).toContain('<main id="app">');
    expect(html).toContain("main.js");
  });

  it("answers an easy riddle correctly and the progress panel updates", async () => {
    const { root, session } = freshApp();
    await session.start({ difficulty: "easy", count: 1, seed: 7 });

    expect(text(root, ".riddle-kind")).toContain("easy");
    expect(text(root, ".attempts")).toContain("attempts left: 1");
    expect(root.querySelectorAll(".riddle-line").length).toBeGreaterThanOrEqual(3);

    // every easy riddle in the fixture corpus targets "dog"
    await session.submitGuess("Dog");
    expect(session.current().lastOutcome?.correct).toBe(true);
    expect(session.current().done).toBe(true);
    expect(statNumber(root, "solved-easy")).toBe(1);
    expect(text(root, ".riddle-card.done")).toContain("Quiz complete");

    const served = await new QuizApi(baseUrl).progress(
      session.current().sessionId as string);
    expect(statNumber(root, "solved-easy")).toBe(served.solved.easy);
    expect(statNumber(root, "hints-used")).toBe(served.hints_used);
  });

  it("failing a difficult riddle twice shows two distinct hints", async () => {
    const { root, session } = freshApp();
    await session.start({ difficulty: "difficult", concept: "dog",
                          count: 1, seed: 3 });
    expect(text(root, ".riddle-kind")).toContain("difficult");
    expect(text(root, ".attempts")).toContain("attempts left: 3");

    await session.submitGuess("not the answer");
    let hints = Array.from(root.querySelectorAll(".hint"),
                           (n) => n.textContent);
    expect(hints).toHaveLength(1);
    expect(text(root, ".verdict")).toContain("Not quite");

    await session.submitGuess("still wrong");
    hints = Array.from(root.querySelectorAll(".hint"), (n) => n.textContent);
    expect(hints).toHaveLength(2);
    expect(new Set(hints).size).toBe(2);
    expect(text(root, ".attempts")).toContain("attempts left: 1");

    // progress panel mirrors GET /progress exactly, including hint count
    const served = await new QuizApi(baseUrl).progress(
      session.current().sessionId as string);
    expect(served.hints_used).toBe(2);
    expect(statNumber(root, "hints-used")).toBe(served.hints_used);
    expect(statNumber(root, "solved-difficult")).toBe(served.solved.difficult);
    expect(statNumber(root, "failed-difficult")).toBe(served.failed.difficult);
  });

  it("a hard refresh restores the session from the URL hash", async () => {
    const first = freshApp();
    await first.session.start({ difficulty: "difficult", concept: "dog",
                                count: 2, seed: 11 });
    await first.session.submitGuess("wrong once");
    const sessionId = first.session.current().sessionId as string;
    const riddleId = first.session.current().riddle?.riddle_id;
    expect(window.location.hash).toBe(`#session=${sessionId}`);

    // simulate the reload: fresh DOM + state rebuilt from the id alone
    const second = freshApp();
    await second.session.resume(sessionId);
    const state = second.session.current();
    expect(state.riddle?.riddle_id).toBe(riddleId);
    expect(state.issuedHints).toHaveLength(1);
    expect(text(second.root, ".attempts")).toContain("attempts left: 2");
  });

  it("shows an error banner for an impossible filter", async () => {
    const { root, session } = freshApp();
    await session.start({ concept: "unicorn" });
    expect(text(root, ".error-banner")).toContain("no riddles match");
  });

  it("redacted riddle view never carries solutions", async () => {
    const { session } = freshApp();
    await session.start({ difficulty: "difficult", concept: "dog",
                          count: 1, seed: 1 });
    const response = await fetch(
      `${baseUrl}/sessions/${session.current().sessionId}/riddle`);
    const body = await response.text();
    expect(body).not.toContain("solutions");
  });
});
