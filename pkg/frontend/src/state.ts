/** Pure review-session state.
 *
 * The queue comes from the service in document order and is the only
 * source of truth; the UI keeps no tagging knowledge of its own.  A
 * choice is applied optimistically (card advances immediately) and
 * rolled back if the service rejects it.
 */

import type { PendingItem, ResultResponse } from "./types.js";

export type Phase = "reviewing" | "finishing" | "done" | "error";

export interface InFlightChoice {
  item: PendingItem;
  candidateIndex: number;
}

export interface ReviewState {
  phase: Phase;
  sessionId: string;
  queue: PendingItem[];
  position: number;
  total: number;
  resolved: number;
  inFlight: InFlightChoice | null;
  result: ResultResponse | null;
  error: string | null;
}

export function beginReview(
  sessionId: string,
  items: PendingItem[],
): ReviewState {
  return {
    phase: items.length === 0 ? "finishing" : "reviewing",
    sessionId,
    queue: items,
    position: 0,
    total: items.length,
    resolved: 0,
    inFlight: null,
    result: null,
    error: null,
  };
}

export function currentItem(state: ReviewState): PendingItem | null {
  return state.position < state.queue.length
    ? state.queue[state.position]
    : null;
}

/** Optimistically record a choice for the current card and advance. */
export function chooseOptimistic(
  state: ReviewState,
  candidateIndex: number,
): ReviewState {
  const item = currentItem(state);
  if (state.phase !== "reviewing" || item === null || state.inFlight !== null) {
    return state;
  }
  if (candidateIndex < 0 || candidateIndex >= item.candidates.length) {
    return state;
  }
  const position = state.position + 1;
  return {
    ...state,
    position,
    resolved: state.resolved + 1,
    inFlight: { item, candidateIndex },
    phase: position >= state.queue.length ? "finishing" : "reviewing",
  };
}

/** The service accepted the in-flight choice. */
export function confirmChoice(state: ReviewState): ReviewState {
  return { ...state, inFlight: null, error: null };
}

/** The service rejected the in-flight choice: restore the card. */
export function rollbackChoice(state: ReviewState, error: string): ReviewState {
  if (state.inFlight === null) {
    return state;
  }
  return {
    ...state,
    position: state.position - 1,
    resolved: state.resolved - 1,
    inFlight: null,
    phase: "reviewing",
    error,
  };
}

export function completeReview(
  state: ReviewState,
  result: ResultResponse,
): ReviewState {
  return { ...state, phase: "done", result, error: null };
}

export function failReview(state: ReviewState, error: string): ReviewState {
  return { ...state, phase: "error", error };
}

export function remaining(state: ReviewState): number {
  return state.total - state.resolved;
}

/** Map a pressed key to a candidate index ("1" selects candidate 0). */
export function keyToCandidate(key: string, candidateCount: number): number | null {
  if (!/^[1-9]$/.test(key)) {
    return null;
  }
  const index = Number(key) - 1;
  return index < candidateCount ? index : null;
}
