/** Wiring: session bootstrap, keyboard input, and the service round-trips.
 *
 * The session id lives in the URL hash, so a reload reconstructs the
 * pending view entirely from the service.
 */

import { ApiError, Client } from "./api.js";
import type { ReviewState } from "./state.js";
import {
  beginReview,
  chooseOptimistic,
  completeReview,
  confirmChoice,
  currentItem,
  failReview,
  keyToCandidate,
  rollbackChoice,
} from "./state.js";
import { render } from "./view.js";

const DEFAULT_SERVICE = "http://127.0.0.1:8765";

function hashParams(): URLSearchParams {
  return new URLSearchParams(window.location.hash.replace(/^#/, ""));
}

function setHash(sessionId: string, service: string): void {
  const params = new URLSearchParams();
  params.set("s", sessionId);
  if (service !== DEFAULT_SERVICE) {
    params.set("u", service);
  }
  window.location.hash = params.toString();
}

class App {
  private state: ReviewState | null = null;
  private client: Client;
  private service: string;

  constructor(
    private readonly root: HTMLElement,
    private readonly startForm: HTMLElement,
  ) {
    this.service = hashParams().get("u") ?? DEFAULT_SERVICE;
    this.client = new Client(this.service);
  }

  private redraw(): void {
    if (!this.state) {
      return;
    }
    render(this.root, this.state, {
      onChoose: (i) => void this.choose(i),
      onRetry: () => void this.retry(),
      onNewSession: () => this.reset(),
    });
  }

  private set(state: ReviewState): void {
    this.state = state;
    this.redraw();
    if (state.phase === "finishing") {
      void this.finish();
    }
  }

  reset(): void {
    this.state = null;
    window.location.hash = "";
    this.root.replaceChildren();
    this.startForm.style.display = "";
  }

  async start(text: string, service: string): Promise<void> {
    this.service = service;
    this.client = new Client(service);
    try {
      const created = await this.client.createSession(text);
      setHash(created.session_id, service);
      await this.resume(created.session_id);
    } catch (error) {
      this.showStartError(error);
    }
  }

  async resume(sessionId: string): Promise<void> {
    this.startForm.style.display = "none";
    try {
      const pending = await this.client.pending(sessionId);
      this.set(beginReview(sessionId, pending.items));
    } catch (error) {
      if (error instanceof ApiError && error.isStaleSession) {
        this.set(failReview(beginReview(sessionId, []), "This session no longer exists."));
      } else {
        this.set(failReview(beginReview(sessionId, []), describe(error)));
      }
    }
  }

  private async choose(candidateIndex: number): Promise<void> {
    const state = this.state;
    if (!state) {
      return;
    }
    const item = currentItem(state);
    if (!item) {
      return;
    }
    const next = chooseOptimistic(state, candidateIndex);
    if (next === state) {
      return;
    }
    this.set(next);
    try {
      await this.client.choose(state.sessionId, item, candidateIndex);
      this.set(confirmChoice(this.state ?? next));
    } catch (error) {
      this.set(rollbackChoice(this.state ?? next, describe(error)));
    }
  }

  private async finish(): Promise<void> {
    const state = this.state;
    if (!state) {
      return;
    }
    try {
      const result = await this.client.result(state.sessionId);
      this.set(completeReview(state, result));
    } catch (error) {
      this.set(failReview(state, describe(error)));
    }
  }

  private async retry(): Promise<void> {
    const state = this.state;
    if (!state) {
      return;
    }
    // re-synchronize with the service; no local tagging state to lose
    await this.resume(state.sessionId);
  }

  handleKey(key: string): void {
    const state = this.state;
    if (!state || state.phase !== "reviewing") {
      return;
    }
    const item = currentItem(state);
    if (!item) {
      return;
    }
    const index = keyToCandidate(key, item.candidates.length);
    if (index !== null) {
      void this.choose(index);
    }
  }

  private showStartError(error: unknown): void {
    const box = this.startForm.querySelector(".start-error");
    if (box) {
      box.textContent = describe(error);
    }
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return error.message;
  }
  if (error instanceof Error) {
    return `service unreachable: ${error.message}`;
  }
  return String(error);
}

function bootstrap(): void {
  const root = document.getElementById("app");
  const startForm = document.getElementById("start");
  const textInput = document.getElementById("text") as HTMLTextAreaElement;
  const serviceInput = document.getElementById("service") as HTMLInputElement;
  const startButton = document.getElementById("create") as HTMLButtonElement;
  if (!root || !startForm) {
    return;
  }
  serviceInput.value = hashParams().get("u") ?? DEFAULT_SERVICE;
  const app = new App(root, startForm);
  startButton.addEventListener("click", () => {
    if (textInput.value.trim()) {
      void app.start(textInput.value, serviceInput.value.trim() || DEFAULT_SERVICE);
    }
  });
  document.addEventListener("keydown", (event) => {
    if (event.target instanceof HTMLTextAreaElement) {
      return;
    }
    app.handleKey(event.key);
  });
  const existing = hashParams().get("s");
  if (existing) {
    void app.resume(existing);
  }
}

bootstrap();
