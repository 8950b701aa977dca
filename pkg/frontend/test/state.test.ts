import { describe, expect, it } from "vitest";

import {
  beginReview,
  chooseOptimistic,
  completeReview,
  confirmChoice,
  currentItem,
  failReview,
  keyToCandidate,
  remaining,
  rollbackChoice,
} from "../src/state.js";
import type { PendingItem, ResultResponse } from "../src/types.js";

function item(surface: string, candidates = 2, tokenIndex = 0): PendingItem {
  return {
    sentence_index: 0,
    token_index: tokenIndex,
    surface,
    context: ["bir", surface, "daha"],
    candidates: Array.from({ length: candidates }, (_, i) => ({
      index: i,
      canonical: `cat=N;root=${surface}${i}`,
      display: `N(${surface}${i})`,
    })),
  };
}

const QUEUE = [item("bulunan"), item("derin", 5), item("en")];

describe("beginReview", () => {
  it("starts on the first item in document order", () => {
    const state = beginReview("sid", QUEUE);
    expect(state.phase).toBe("reviewing");
    expect(currentItem(state)?.surface).toBe("bulunan");
    expect(remaining(state)).toBe(3);
  });

  it("moves straight to finishing when nothing is pending", () => {
    expect(beginReview("sid", []).phase).toBe("finishing");
  });
});

describe("chooseOptimistic", () => {
  it("advances to the next card and tracks the in-flight choice", () => {
    const state = chooseOptimistic(beginReview("sid", QUEUE), 1);
    expect(currentItem(state)?.surface).toBe("derin");
    expect(state.inFlight?.item.surface).toBe("bulunan");
    expect(state.inFlight?.candidateIndex).toBe(1);
    expect(remaining(state)).toBe(2);
  });

  it("ignores out-of-range candidates", () => {
    const state = beginReview("sid", QUEUE);
    expect(chooseOptimistic(state, 7)).toBe(state);
    expect(chooseOptimistic(state, -1)).toBe(state);
  });

  it("refuses a second choice while one is in flight", () => {
    const first = chooseOptimistic(beginReview("sid", QUEUE), 0);
    expect(chooseOptimistic(first, 0)).toBe(first);
  });

  it("reaches finishing after the last card", () => {
    let state = beginReview("sid", QUEUE);
    for (const _ of QUEUE) {
      state = confirmChoice(chooseOptimistic(state, 0));
    }
    expect(state.phase).toBe("finishing");
    expect(remaining(state)).toBe(0);
  });
});

describe("rollbackChoice", () => {
  it("restores the same card and surfaces the error", () => {
    const before = beginReview("sid", QUEUE);
    const optimistic = chooseOptimistic(before, 1);
    const rolledBack = rollbackChoice(optimistic, "rejected");
    expect(currentItem(rolledBack)?.surface).toBe("bulunan");
    expect(rolledBack.resolved).toBe(0);
    expect(rolledBack.error).toBe("rejected");
    expect(rolledBack.inFlight).toBeNull();
  });

  it("is a no-op without an in-flight choice", () => {
    const state = beginReview("sid", QUEUE);
    expect(rollbackChoice(state, "x")).toBe(state);
  });
});

describe("completion and failure", () => {
  const result: ResultResponse = {
    tsv: "a\tcat=N;root=a\tuser\n",
    stats: {
      total_words: 1,
      parse_histogram: { "0": 0, "1": 1, "2": 0, "3": 0, "4": 0, "5+": 0 },
      parse_histogram_counts: { "0": 0, "1": 1, "2": 0, "3": 0, "4": 0, "5+": 0 },
      method_counts: { unambiguous: 1 },
      resolved_auto_fraction: 0,
      resolved_user_fraction: 0,
      resolved_by_multiword_fraction: 0,
      resolved_by_constraint_fraction: 0,
      accuracy_vs_gold: null,
      unknown_forms: [],
      root_frequencies: { a: 1 },
    },
  };

  it("stores the final result", () => {
    const state = completeReview(beginReview("sid", []), result);
    expect(state.phase).toBe("done");
    expect(state.result?.stats.total_words).toBe(1);
  });

  it("records a fatal error", () => {
    const state = failReview(beginReview("sid", QUEUE), "gone");
    expect(state.phase).toBe("error");
    expect(state.error).toBe("gone");
  });
});

describe("keyToCandidate", () => {
  it("maps digit keys to zero-based candidates", () => {
    expect(keyToCandidate("1", 3)).toBe(0);
    expect(keyToCandidate("3", 3)).toBe(2);
  });

  it("rejects digits beyond the candidate list", () => {
    expect(keyToCandidate("4", 3)).toBeNull();
    expect(keyToCandidate("9", 3)).toBeNull();
  });

  it("rejects non-digits and zero", () => {
    expect(keyToCandidate("a", 3)).toBeNull();
    expect(keyToCandidate("0", 3)).toBeNull();
    expect(keyToCandidate("Enter", 3)).toBeNull();
  });
});
