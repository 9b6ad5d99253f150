import { ApiError } from "./api";
import type {
  DecisionRecord,
  DecisionRequest,
  ItemStatus,
  ItemSummary,
} from "./types";

export interface ItemFilter {
  status: ItemStatus | "all";
  wf: "all" | "1" | "0";
  decision: "all" | "accept" | "reject" | "undecided";
}

export const NO_FILTER: ItemFilter = {
  status: "all",
  wf: "all",
  decision: "all",
};

export function filterItems(
  items: ItemSummary[],
  filter: ItemFilter,
): ItemSummary[] {
  return items.filter((item) => {
    if (filter.status !== "all" && item.status !== filter.status) return false;
    if (filter.wf !== "all" && String(item.wf) !== filter.wf) return false;
    if (filter.decision === "undecided") return item.decision === null;
    if (filter.decision !== "all") {
      return item.decision?.decision === filter.decision;
    }
    return true;
  });
}

export type SortKey = "item-id" | "status" | "readings" | "wf";

export function sortItems(
  items: ItemSummary[],
  key: SortKey,
  ascending = true,
): ItemSummary[] {
  const direction = ascending ? 1 : -1;
  return [...items].sort((a, b) => {
    const left = a[key];
    const right = b[key];
    if (left === right) return a["item-id"] < b["item-id"] ? -1 : 1;
    return (left < right ? -1 : 1) * direction;
  });
}

// Keyboard navigation over the visible row order; clamps at both ends.
export function moveSelection(
  ids: string[],
  current: string | null,
  delta: number,
): string | null {
  if (ids.length === 0) return null;
  const at = current === null ? -1 : ids.indexOf(current);
  if (at === -1) return delta >= 0 ? ids[0] : ids[ids.length - 1];
  const next = Math.min(ids.length - 1, Math.max(0, at + delta));
  return ids[next];
}

// First undecided item strictly after `afterId` in list order, wrapping
// around; null when everything is decided.
export function nextUndecided(
  items: ItemSummary[],
  afterId: string | null,
): string | null {
  if (items.length === 0) return null;
  const start =
    afterId === null
      ? 0
      : items.findIndex((item) => item["item-id"] === afterId) + 1;
  for (let step = 0; step < items.length; step += 1) {
    const item = items[(start + step) % items.length];
    if (item.decision === null) return item["item-id"];
  }
  return null;
}

export interface DecisionOutcome {
  ok: boolean;
  error?: string;
}

interface DecisionApi {
  postDecision(
    itemId: string,
    request: DecisionRequest,
  ): Promise<DecisionRecord>;
}

// Holds the item list and applies decisions optimistically: the row flips
// immediately, then is either confirmed with the server's record or rolled
// back when the POST is rejected.  A 403 latches read-only mode.
export class ItemStore {
  items: ItemSummary[] = [];
  readOnly = false;
  private listeners: Array<() => void> = [];

  constructor(private readonly api: DecisionApi) {}

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  setItems(items: ItemSummary[]): void {
    this.items = items;
    this.notify();
  }

  get(itemId: string): ItemSummary | undefined {
    return this.items.find((item) => item["item-id"] === itemId);
  }

  private replaceDecision(itemId: string, decision: DecisionRecord | null) {
    this.items = this.items.map((item) =>
      item["item-id"] === itemId ? { ...item, decision } : item,
    );
  }

  async decide(
    itemId: string,
    request: DecisionRequest,
  ): Promise<DecisionOutcome> {
    const before = this.get(itemId);
    if (before === undefined) return { ok: false, error: `unknown item ${itemId}` };
    const snapshot = before.decision;

    this.replaceDecision(itemId, {
      "item-id": itemId,
      "decision": request.decision,
      "reading-index": request.readingIndex,
      "note": request.note,
    });
    this.notify();

    try {
      const confirmed = await this.api.postDecision(itemId, request);
      this.replaceDecision(itemId, confirmed);
      this.notify();
      return { ok: true };
    } catch (err) {
      this.replaceDecision(itemId, snapshot);
      if (err instanceof ApiError && err.status === 403) {
        this.readOnly = true;
      }
      this.notify();
      const message = err instanceof Error ? err.message : String(err);
      return { ok: false, error: message };
    }
  }
}
