/** DOM rendering for the review flow; logic stays in state.ts. */

import type { ReviewState } from "./state.js";
import { currentItem, remaining } from "./state.js";
import type { PendingItem, StatsReport } from "./types.js";

export interface ViewHandlers {
  onChoose(candidateIndex: number): void;
  onRetry(): void;
  onNewSession(): void;
}

const HIST_BUCKETS = ["0", "1", "2", "3", "4", "5+"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function renderContext(item: PendingItem): HTMLElement {
  const box = el("p", "context");
  item.context.forEach((surface, i) => {
    const word = el(
      "span",
      i === item.token_index ? "token highlight" : "token",
      surface,
    );
    box.appendChild(word);
    box.appendChild(document.createTextNode(" "));
  });
  return box;
}

function renderCard(
  state: ReviewState,
  item: PendingItem,
  handlers: ViewHandlers,
): HTMLElement {
  const card = el("div", "card");
  const progress = el(
    "div",
    "progress",
    `${state.resolved} of ${state.total} resolved — ${remaining(state)} to go`,
  );
  card.appendChild(progress);
  card.appendChild(renderContext(item));
  card.appendChild(
    el("p", "prompt", `Pick the correct analysis for “${item.surface}”:`),
  );
  const list = el("ol", "candidates");
  item.candidates.forEach((candidate, i) => {
    const entry = el("li");
    const button = el("button", "candidate");
    button.appendChild(el("span", "hint", `${i + 1}`));
    button.appendChild(el("span", "display", candidate.display));
    button.appendChild(el("span", "canonical", candidate.canonical));
    button.addEventListener("click", () => handlers.onChoose(i));
    entry.appendChild(button);
    list.appendChild(entry);
  });
  card.appendChild(list);
  card.appendChild(
    el("p", "help", "Press 1–9 to choose with the keyboard."),
  );
  return card;
}

function renderStats(stats: StatsReport): HTMLElement {
  const box = el("div", "stats");
  box.appendChild(el("h2", undefined, "Session complete"));
  box.appendChild(el("p", undefined, `${stats.total_words} words tagged.`));

  const table = el("table", "histogram");
  const head = el("tr");
  head.appendChild(el("th", undefined, "parses"));
  HIST_BUCKETS.forEach((b) => head.appendChild(el("th", undefined, b)));
  table.appendChild(head);
  const row = el("tr");
  row.appendChild(el("td", undefined, "share"));
  HIST_BUCKETS.forEach((bucket) => {
    const fraction = stats.parse_histogram[bucket] ?? 0;
    row.appendChild(el("td", undefined, `${(fraction * 100).toFixed(1)}%`));
  });
  table.appendChild(row);
  box.appendChild(table);

  const methods = el("ul", "methods");
  for (const [method, count] of Object.entries(stats.method_counts)) {
    methods.appendChild(el("li", undefined, `${method}: ${count}`));
  }
  box.appendChild(methods);
  return box;
}

function renderResultView(
  state: ReviewState,
  handlers: ViewHandlers,
): HTMLElement {
  const box = el("div", "done");
  if (state.result) {
    box.appendChild(renderStats(state.result.stats));
    const output = el("details", "output");
    output.appendChild(el("summary", undefined, "Tagged output"));
    const pre = el("pre");
    pre.textContent = state.result.tsv;
    output.appendChild(pre);
    box.appendChild(output);
  }
  const again = el("button", "primary", "Start a new session");
  again.addEventListener("click", () => handlers.onNewSession());
  box.appendChild(again);
  return box;
}

function renderErrorView(
  state: ReviewState,
  handlers: ViewHandlers,
): HTMLElement {
  const box = el("div", "error-view");
  box.appendChild(el("p", "error", state.error ?? "something went wrong"));
  const retry = el("button", "primary", "Retry");
  retry.addEventListener("click", () => handlers.onRetry());
  box.appendChild(retry);
  const fresh = el("button", undefined, "Start a new session");
  fresh.addEventListener("click", () => handlers.onNewSession());
  box.appendChild(fresh);
  return box;
}

export function render(
  root: HTMLElement,
  state: ReviewState,
  handlers: ViewHandlers,
): void {
  root.replaceChildren();
  if (state.error && state.phase === "reviewing") {
    const banner = el("div", "banner");
    banner.appendChild(el("span", undefined, state.error));
    const retry = el("button", undefined, "Retry");
    retry.addEventListener("click", () => handlers.onRetry());
    banner.appendChild(retry);
    root.appendChild(banner);
  }
  switch (state.phase) {
    case "reviewing": {
      const item = currentItem(state);
      if (item) {
        root.appendChild(renderCard(state, item, handlers));
      }
      break;
    }
    case "finishing":
      root.appendChild(el("p", "loading", "Fetching the final output…"));
      break;
    case "done":
      root.appendChild(renderResultView(state, handlers));
      break;
    case "error":
      root.appendChild(renderErrorView(state, handlers));
      break;
  }
}
