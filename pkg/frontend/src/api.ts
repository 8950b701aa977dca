/** Thin typed client for the tagging service; every UI action maps to
 * exactly one of these calls. */

import type {
  ChoiceResponse,
  CreateSessionResponse,
  PendingItem,
  PendingResponse,
  ResultResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }

  get isStaleSession(): boolean {
    return this.status === 404;
  }
}

async function detailOf(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") {
      return body.detail;
    }
  } catch {
    // fall through to the generic message
  }
  return `request failed with status ${response.status}`;
}

export class Client {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await this.fetchImpl(
      `${this.baseUrl.replace(/\/$/, "")}${path}`,
      {
        method,
        headers: body === undefined ? {} : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      },
    );
    if (!response.ok) {
      throw new ApiError(response.status, await detailOf(response));
    }
    return (await response.json()) as T;
  }

  createSession(text: string): Promise<CreateSessionResponse> {
    return this.request("POST", "/sessions", { text });
  }

  pending(sessionId: string): Promise<PendingResponse> {
    return this.request("GET", `/sessions/${sessionId}/pending`);
  }

  choose(
    sessionId: string,
    item: PendingItem,
    candidateIndex: number,
  ): Promise<ChoiceResponse> {
    return this.request("POST", `/sessions/${sessionId}/choices`, {
      sentence_index: item.sentence_index,
      token_index: item.token_index,
      parse_index: candidateIndex,
    });
  }

  result(sessionId: string): Promise<ResultResponse> {
    return this.request("GET", `/sessions/${sessionId}/result`);
  }
}
