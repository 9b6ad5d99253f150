import type {
  CompareRow,
  DecisionRecord,
  DecisionRequest,
  ItemDetail,
  ItemSummary,
  ReadingDetail,
  RunInfo,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    const text = await response.text();
    if (!response.ok) {
      let message = `${response.status} for ${path}`;
      try {
        const body = JSON.parse(text);
        if (body && typeof body.error === "string") message = body.error;
      } catch {
        // non-JSON error body: keep the status line
      }
      throw new ApiError(response.status, message);
    }
    return JSON.parse(text) as T;
  }

  getRun(): Promise<RunInfo> {
    return this.request("/api/run");
  }

  listItems(): Promise<ItemSummary[]> {
    return this.request("/api/items");
  }

  getItem(itemId: string): Promise<ItemDetail> {
    return this.request(`/api/items/${encodeURIComponent(itemId)}`);
  }

  getReading(itemId: string, index: number): Promise<ReadingDetail> {
    return this.request(
      `/api/items/${encodeURIComponent(itemId)}/readings/${index}`,
    );
  }

  getCompare(): Promise<CompareRow[]> {
    return this.request("/api/compare");
  }

  async postDecision(
    itemId: string,
    request: DecisionRequest,
  ): Promise<DecisionRecord> {
    const body = {
      "decision": request.decision,
      "reading-index": request.readingIndex,
      "note": request.note,
    };
    const reply = await this.request<{ ok: boolean; decision: DecisionRecord }>(
      `/api/items/${encodeURIComponent(itemId)}/decision`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      },
    );
    return reply.decision;
  }
}
