// Pure view-state machine for the search loop. Transitions take a state
// plus an API payload and return the next state; the DOM layer renders
// whatever state it is handed, so the machine is testable without a
// browser.

import type { Candidate, HistoryEntry, JudgmentLabel, ResultRow, SessionState } from "./api.js";

export type Phase = "entering_query" | "confirming_concepts" | "reviewing_results";

export interface ErrorBanner {
  message: string;
  retryable: boolean;
  /** A write conflict means another tab advanced the session: offer reload. */
  conflict: boolean;
}

export interface ViewState {
  phase: Phase;
  sessionId: string | null;
  queryText: string;
  iteration: number | null;
  candidates: Candidate[];
  selected: ReadonlySet<number>;
  results: ResultRow[];
  pending: ReadonlyMap<string, JudgmentLabel>;
  history: HistoryEntry[];
  error: ErrorBanner | null;
  busy: boolean;
}

export function initialState(): ViewState {
  return {
    phase: "entering_query",
    sessionId: null,
    queryText: "",
    iteration: null,
    candidates: [],
    selected: new Set(),
    results: [],
    pending: new Map(),
    history: [],
    error: null,
    busy: false,
  };
}

export function sessionCreated(
  state: ViewState,
  sessionId: string,
  queryText: string,
  candidates: Candidate[],
): ViewState {
  return {
    ...initialState(),
    phase: "confirming_concepts",
    sessionId,
    queryText,
    candidates,
  };
}

export function toggleCandidate(state: ViewState, conceptId: number): ViewState {
  const selected = new Set(state.selected);
  if (selected.has(conceptId)) {
    selected.delete(conceptId);
  } else {
    selected.add(conceptId);
  }
  return { ...state, selected };
}

export function canConfirm(state: ViewState): boolean {
  return state.phase === "confirming_concepts" && state.selected.size > 0 && !state.busy;
}

export function confirmed(state: ViewState, iteration: number, results: ResultRow[]): ViewState {
  return {
    ...state,
    phase: "reviewing_results",
    iteration,
    results,
    pending: new Map(),
    history: [{ iteration, video_ids: results.map((r) => r.video_id) }],
    error: null,
    busy: false,
  };
}

/** Cycle a video's pending judgment: none -> label, same label -> none. */
export function toggleJudgment(
  state: ViewState,
  videoId: string,
  label: JudgmentLabel,
): ViewState {
  const pending = new Map(state.pending);
  if (pending.get(videoId) === label) {
    pending.delete(videoId);
  } else {
    pending.set(videoId, label);
  }
  return { ...state, pending };
}

export function canRefine(state: ViewState): boolean {
  return state.phase === "reviewing_results" && state.pending.size > 0 && !state.busy;
}

export function refined(state: ViewState, iteration: number, results: ResultRow[]): ViewState {
  return {
    ...state,
    iteration,
    results,
    pending: new Map(),
    history: [...state.history, { iteration, video_ids: results.map((r) => r.video_id) }],
    error: null,
    busy: false,
  };
}

/** Rebuild the view from GET /sessions/{id} (deep link or conflict reload). */
export function restored(state: ViewState, session: SessionState): ViewState {
  const confirmedSession = session.iteration !== null;
  return {
    ...initialState(),
    phase: confirmedSession ? "reviewing_results" : "confirming_concepts",
    sessionId: session.session_id,
    queryText: session.query.original,
    iteration: session.iteration,
    candidates: session.candidates,
    results: session.results,
    history: session.history,
  };
}

export function failed(state: ViewState, message: string, retryable: boolean, conflict = false): ViewState {
  return { ...state, busy: false, error: { message, retryable, conflict } };
}

export function working(state: ViewState): ViewState {
  return { ...state, busy: true, error: null };
}

export function rankingChanged(history: HistoryEntry[], a: number, b: number): boolean {
  const first = history.find((h) => h.iteration === a);
  const second = history.find((h) => h.iteration === b);
  if (!first || !second) return false;
  return (
    first.video_ids.length !== second.video_ids.length ||
    first.video_ids.some((vid, i) => vid !== second.video_ids[i])
  );
}
