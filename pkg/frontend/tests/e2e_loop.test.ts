// End-to-end loop against the real search service on the demo corpus:
// enter a query, confirm two concepts, judge five results, refine twice.
// Expects the iteration badge to walk Q0 -> Q1 -> Q2 and the ranking to
// change between Q0 and Q2. Requires python3 with the backend package
// installed (pip install -e ..).

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { mountApp, type AppController } from "../src/main.js";
import { rankingChanged } from "../src/state.js";

const REPO_ROOT = resolve(import.meta.dirname, "..", "..");
const CORPUS = join(REPO_ROOT, "demos", "corpus");
const PORT = 8941;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;

async function waitForServer(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/concepts`);
      if (response.ok) return;
    } catch (error) {
      lastError = error;
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error(`service did not come up on ${BASE}: ${lastError}`);
}

function query<T extends HTMLElement>(selector: string): T {
  const node = document.querySelector(selector);
  if (!node) throw new Error(`missing element ${selector}`);
  return node as T;
}

beforeAll(async () => {
  const workDir = mkdtempSync(join(tmpdir(), "cbvr-e2e-"));
  const snapshot = join(workDir, "demo.cbvr");
  const indexRun = spawnSync(
    "python3",
    [
      "-m", "cbvr.service.cli", "index",
      "--concepts", join(CORPUS, "concepts.xml"),
      "--contexts", join(CORPUS, "contexts.xml"),
      "--lexicon", join(CORPUS, "lexicon.tsv"),
      "--out", snapshot,
    ],
    { encoding: "utf-8" },
  );
  if (indexRun.status !== 0) {
    throw new Error(`cbvr index failed: ${indexRun.stderr || indexRun.stdout}`);
  }
  server = spawn(
    "python3",
    ["-m", "cbvr.service.cli", "serve", "--snapshot", snapshot, "--listen", `127.0.0.1:${PORT}`],
    { stdio: "ignore" },
  );
  await waitForServer(20_000);
}, 40_000);

afterAll(() => {
  server?.kill();
});

describe("interactive loop on the demo corpus", () => {
  it(
    "walks Q0 -> Q1 -> Q2 with a ranking change",
    async () => {
      document.body.innerHTML = '<div id="root"></div>';
      window.location.hash = "";
      const app: AppController = mountApp(query("#root"), { baseUrl: BASE });

      // Enter the query.
      const input = query<HTMLInputElement>('[data-testid="query-input"]');
      input.value = "news";
      input.dispatchEvent(new Event("input", { bubbles: true }));
      query<HTMLFormElement>("form.query-form").dispatchEvent(
        new Event("submit", { bubbles: true, cancelable: true }),
      );
      await app.idle();
      expect(app.getState().phase).toBe("confirming_concepts");
      const candidates = app.getState().candidates;
      expect(candidates.length).toBeGreaterThanOrEqual(2);

      // Confirm the top two concepts.
      query<HTMLInputElement>(`[data-testid="candidate-${candidates[0]!.concept_id}"]`).click();
      query<HTMLInputElement>(`[data-testid="candidate-${candidates[1]!.concept_id}"]`).click();
      query<HTMLButtonElement>('[data-testid="confirm"]').click();
      await app.idle();
      expect(query('[data-testid="iteration-badge"]').textContent).toBe("Q0");

      const initial = app.getState().results;
      expect(initial.length).toBeGreaterThanOrEqual(5);

      // Judge five results, twice, refining after each batch.
      const judge = () => {
        for (const result of app.getState().results.slice(0, 5)) {
          const label = result.video_id === "shot111" ? "irrelevant" : "relevant";
          query<HTMLButtonElement>(`[data-testid="${label}-${result.video_id}"]`).click();
        }
      };

      judge();
      expect(app.getState().pending.size).toBe(5);
      query<HTMLButtonElement>('[data-testid="refine"]').click();
      await app.idle();
      expect(query('[data-testid="iteration-badge"]').textContent).toBe("Q1");

      judge();
      query<HTMLButtonElement>('[data-testid="refine"]').click();
      await app.idle();
      expect(query('[data-testid="iteration-badge"]').textContent).toBe("Q2");

      // The ranking moved between the first and the third iteration.
      const history = app.getState().history;
      expect(history.map((h) => h.iteration)).toEqual([0, 1, 2]);
      expect(rankingChanged(history, 0, 2)).toBe(true);

      // Deep link: a fresh mount with the session hash restores the phase.
      const sessionId = app.getState().sessionId!;
      window.location.hash = `session=${sessionId}`;
      document.body.innerHTML = '<div id="root"></div>';
      const remounted = mountApp(query("#root"), { baseUrl: BASE });
      await remounted.idle();
      expect(remounted.getState().phase).toBe("reviewing_results");
      expect(remounted.getState().iteration).toBe(2);
      expect(query('[data-testid="iteration-badge"]').textContent).toBe("Q2");
    },
    60_000,
  );

  it("rejects a stopword-only query with an inline error", async () => {
    document.body.innerHTML = '<div id="root"></div>';
    window.location.hash = "";
    const app = mountApp(query("#root"), { baseUrl: BASE });
    const input = query<HTMLInputElement>('[data-testid="query-input"]');
    input.value = "the";
    input.dispatchEvent(new Event("input", { bubbles: true }));
    query<HTMLFormElement>("form.query-form").dispatchEvent(
      new Event("submit", { bubbles: true, cancelable: true }),
    );
    await app.idle();
    expect(app.getState().phase).toBe("entering_query");
    expect(query('[data-testid="error-banner"]').textContent).toContain("stopword");
  }, 20_000);
});
