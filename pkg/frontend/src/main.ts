// Browser entry point: mount the quiz against the same origin that served
// the bundle, restoring the session named in the URL hash if present.

import { QuizApi } from "./api.js";
import { QuizSession } from "./state.js";
import { mount, sessionIdFromHash } from "./ui.js";

const api = new QuizApi("");
const session = new QuizSession(api);
const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

mount(document, root, session);

const existing = sessionIdFromHash(window.location.hash);
if (existing) {
  void session.resume(existing);
}
