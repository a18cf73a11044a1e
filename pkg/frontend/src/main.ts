// Search console shell: renders the current ViewState into the DOM and
// maps user actions onto API calls. Apart from the demo-mode precision
// panel, every state change is one endpoint call.

import { ApiClient, ApiError, type FetchLike, type JudgmentLabel } from "./api.js";
import { renderPrecisionChart } from "./chart.js";
import { parseRelevantSet, precisionSeries } from "./metrics.js";
import { directionFor } from "./rtl.js";
import {
  canConfirm,
  canRefine,
  confirmed,
  failed,
  initialState,
  refined,
  restored,
  sessionCreated,
  toggleCandidate,
  toggleJudgment,
  working,
  type ViewState,
} from "./state.js";

export interface AppOptions {
  baseUrl?: string;
  fetchFn?: FetchLike;
  windowRef?: Window;
}

export interface AppController {
  getState(): ViewState;
  /** Resolves once no request is in flight (tests poll this). */
  idle(): Promise<void>;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

export function mountApp(root: HTMLElement, options: AppOptions = {}): AppController {
  const win = options.windowRef ?? window;
  const api = new ApiClient(options.baseUrl ?? "", options.fetchFn);

  let state: ViewState = initialState();
  let relevantSet: Set<string> | null = null;
  let lastAction: (() => Promise<void>) | null = null;
  let inFlight: Promise<void> = Promise.resolve();

  const setState = (next: ViewState) => {
    state = next;
    render();
  };

  const run = (action: () => Promise<void>) => {
    lastAction = action;
    setState(working(state));
    inFlight = action().catch((error: unknown) => {
      if (error instanceof ApiError) {
        setState(failed(state, error.message, error.retryable, error.code === "conflict"));
      } else {
        setState(failed(state, String(error), false));
      }
    });
    return inFlight;
  };

  const submitQuery = (text: string) =>
    run(async () => {
      const created = await api.createSession(text);
      win.location.hash = `session=${created.session_id}`;
      setState(sessionCreated(state, created.session_id, text, created.candidates));
    });

  const confirmSelection = () =>
    run(async () => {
      const response = await api.confirmConcepts(state.sessionId!, [...state.selected]);
      setState(confirmed(state, response.iteration, response.results));
    });

  const refineNow = () =>
    run(async () => {
      const judgments = [...state.pending.entries()].map(([video_id, label]) => ({
        video_id,
        label,
      }));
      const response = await api.sendFeedback(state.sessionId!, judgments);
      setState(refined(state, response.iteration, response.results));
    });

  const reloadSession = (sessionId: string) =>
    run(async () => {
      const session = await api.getSession(sessionId);
      setState(restored(state, session));
    });

  const newSearch = () => {
    win.location.hash = "";
    relevantSet = null;
    setState(initialState());
  };

  // --- render helpers -------------------------------------------------------

  function renderBanner(parent: HTMLElement) {
    if (!state.error) return;
    const banner = el("div", { class: "banner", "data-testid": "error-banner" });
    banner.appendChild(el("span", {}, state.error.message));
    if (state.error.conflict && state.sessionId) {
      const reload = el("button", { "data-testid": "reload-session" }, "Reload session");
      reload.addEventListener("click", () => reloadSession(state.sessionId!));
      banner.appendChild(reload);
    } else if (state.error.retryable && lastAction) {
      const retry = el("button", { "data-testid": "retry" }, "Retry");
      const action = lastAction;
      retry.addEventListener("click", () => run(action));
      banner.appendChild(retry);
    }
    parent.appendChild(banner);
  }

  function renderQueryEntry(parent: HTMLElement) {
    const form = el("form", { class: "query-form" });
    const input = el("input", {
      type: "text",
      placeholder: "Describe the videos you want (English or Arabic)",
      "data-testid": "query-input",
      dir: directionFor(state.queryText),
      value: state.queryText,
    });
    input.value = state.queryText;
    input.addEventListener("input", () => {
      input.dir = directionFor(input.value);
    });
    const submit = el("button", { type: "submit", "data-testid": "query-submit" }, "Search");
    form.append(input, submit);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      if (input.value.trim() && !state.busy) submitQuery(input.value);
    });
    parent.appendChild(form);
  }

  function renderCandidates(parent: HTMLElement) {
    parent.appendChild(el("h2", {}, `Concepts matching "${state.queryText}"`));
    const list = el("ul", { class: "candidates", "data-testid": "candidate-list" });
    for (const candidate of state.candidates) {
      const item = el("li", {});
      const label = el("label", {});
      const box = el("input", {
        type: "checkbox",
        "data-testid": `candidate-${candidate.concept_id}`,
      });
      box.checked = state.selected.has(candidate.concept_id);
      box.addEventListener("change", () => setState(toggleCandidate(state, candidate.concept_id)));
      label.append(
        box,
        el("strong", {}, candidate.name),
        el("span", { class: "score" }, ` score ${candidate.score.toFixed(3)}`),
        el("span", { class: "terms" }, ` matched: ${candidate.matched_terms.join(", ")}`),
      );
      if (candidate.context_boost > 0) {
        label.appendChild(el("span", { class: "boost" }, ` context ${candidate.context_boost}`));
      }
      item.appendChild(label);
      list.appendChild(item);
    }
    if (state.candidates.length === 0) {
      list.appendChild(el("li", {}, "No concepts matched this query."));
    }
    parent.appendChild(list);
    const confirm = el("button", { "data-testid": "confirm" }, "Confirm concepts");
    confirm.disabled = !canConfirm(state);
    confirm.addEventListener("click", () => confirmSelection());
    parent.appendChild(confirm);
  }

  function judgeButton(videoId: string, label: JudgmentLabel, caption: string): HTMLButtonElement {
    const button = el("button", {
      class: `judge ${label}`,
      "data-testid": `${label}-${videoId}`,
    }, caption);
    button.setAttribute("aria-pressed", String(state.pending.get(videoId) === label));
    button.addEventListener("click", () => setState(toggleJudgment(state, videoId, label)));
    return button;
  }

  function renderResults(parent: HTMLElement) {
    const header = el("div", { class: "results-header" });
    header.appendChild(
      el("span", { class: "iteration-badge", "data-testid": "iteration-badge" }, `Q${state.iteration}`),
    );
    header.appendChild(el("h2", {}, `Results for "${state.queryText}"`));
    parent.appendChild(header);

    const grid = el("div", { class: "results-grid", "data-testid": "results-grid" });
    for (const result of state.results) {
      const card = el("article", { class: "result-card", "data-video": result.video_id });
      if (result.keyframe_url) {
        card.appendChild(el("img", { src: result.keyframe_url, alt: `keyframe of ${result.video_id}` }));
      }
      card.appendChild(el("h3", {}, `#${result.rank} ${result.video_id}`));
      card.appendChild(el("p", { class: "similarity" }, `similarity ${result.similarity.toFixed(4)}`));
      if (result.judged) {
        card.appendChild(el("p", { class: "prior-judgment" }, `judged ${result.judged}`));
      }

      const details = el("details", {});
      details.appendChild(el("summary", {}, "why this video"));
      const table = el("table", { class: "explain" });
      for (const row of result.explain) {
        const tr = el("tr", {});
        tr.append(
          el("td", {}, String(row.concept_id)),
          el("td", {}, row.query_weight.toFixed(3)),
          el("td", {}, row.video_weight.toFixed(4)),
          el("td", {}, row.product.toFixed(5)),
        );
        table.appendChild(tr);
      }
      details.appendChild(table);
      card.appendChild(details);

      const judge = el("div", { class: "judge-row" });
      judge.append(
        judgeButton(result.video_id, "relevant", "Relevant"),
        judgeButton(result.video_id, "irrelevant", "Irrelevant"),
      );
      card.appendChild(judge);
      grid.appendChild(card);
    }
    parent.appendChild(grid);

    const footer = el("div", { class: "results-footer" });
    const refine = el("button", { "data-testid": "refine" }, "Refine (next iteration)");
    refine.disabled = !canRefine(state);
    refine.addEventListener("click", () => refineNow());
    const reset = el("button", { "data-testid": "new-search" }, "New search");
    reset.addEventListener("click", () => newSearch());
    footer.append(refine, reset);
    parent.appendChild(footer);
  }

  function renderSidePanel(parent: HTMLElement) {
    const panel = el("aside", { class: "side-panel" });
    panel.appendChild(el("h2", {}, "Demo mode: precision@k"));
    panel.appendChild(
      el("p", { class: "hint" }, "Paste ground-truth video ids (or qrels TSV) to chart each iteration."),
    );
    const textarea = el("textarea", { rows: "4", "data-testid": "qrels-input" });
    const load = el("button", { "data-testid": "qrels-load" }, "Load ground truth");
    const chartHost = el("div", { class: "chart-host", "data-testid": "chart-host" });
    load.addEventListener("click", () => {
      relevantSet = parseRelevantSet(textarea.value);
      renderPrecisionChart(chartHost, precisionSeries(state.history, relevantSet));
    });
    panel.append(textarea, load, chartHost);
    if (relevantSet) {
      renderPrecisionChart(chartHost, precisionSeries(state.history, relevantSet));
    }
    parent.appendChild(panel);
  }

  function render() {
    root.textContent = "";
    const container = el("div", { class: "app" });
    const heading = el("header", {});
    heading.appendChild(el("h1", {}, "cbvr search console"));
    if (state.sessionId) {
      heading.appendChild(
        el("a", { href: `#session=${state.sessionId}`, class: "session-link" },
          `session ${state.sessionId.slice(0, 8)}`),
      );
    }
    container.appendChild(heading);
    renderBanner(container);

    const mainArea = el("main", {});
    if (state.phase === "entering_query") {
      renderQueryEntry(mainArea);
    } else if (state.phase === "confirming_concepts") {
      renderCandidates(mainArea);
    } else {
      const layout = el("div", { class: "results-layout" });
      const left = el("section", { class: "results-main" });
      renderResults(left);
      layout.appendChild(left);
      renderSidePanel(layout);
      mainArea.appendChild(layout);
    }
    container.appendChild(mainArea);
    root.appendChild(container);
  }

  render();

  const hashSession = /session=([A-Za-z0-9_-]+)/.exec(win.location.hash)?.[1];
  if (hashSession) {
    reloadSession(hashSession);
  }

  return {
    getState: () => state,
    idle: async () => {
      // Chase the chain: an action may queue another render-triggering call.
      let settled = inFlight;
      await settled;
      while (settled !== inFlight) {
        settled = inFlight;
        await settled;
      }
    },
  };
}

declare global {
  interface Window {
    __cbvrController?: AppController;
  }
}

const autoRoot = typeof document !== "undefined" ? document.getElementById("app") : null;
if (autoRoot) {
  window.__cbvrController = mountApp(autoRoot);
}
