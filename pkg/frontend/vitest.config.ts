import { defineConfig } from "vitest/config";

// The DOM environment's origin must match the live fixture service so the
// app's fetches are same-origin, exactly as when cmd_serve hosts the bundle.
export const FIXTURE_PORT = 8731;

export default defineConfig({
  test: {
    environment: "happy-dom",
    environmentOptions: {
      happyDOM: { url: `http://127.0.0.1:${FIXTURE_PORT}` },
    },
    globalSetup: ["./test/serve-fixture.ts"],
    testTimeout: 30000,
    hookTimeout: 120000,
  },
});
