import { describe, expect, it } from "vitest";
import { ApiError } from "../src/api";
import {
  filterItems,
  ItemStore,
  moveSelection,
  nextUndecided,
  NO_FILTER,
  sortItems,
} from "../src/state";
import type { DecisionRecord, ItemSummary } from "../src/types";
import itemsFixture from "./fixtures/items.json";

const items = itemsFixture as unknown as ItemSummary[];

describe("filtering and sorting", () => {
  it("passes everything through with no filter", () => {
    expect(filterItems(items, NO_FILTER)).toHaveLength(items.length);
  });

  it("filters by status", () => {
    const gaps = filterItems(items, { ...NO_FILTER, status: "lexical-gap" });
    expect(gaps.length).toBeGreaterThan(0);
    expect(gaps.every((item) => item.status === "lexical-gap")).toBe(true);
  });

  it("filters by well-formedness", () => {
    const ill = filterItems(items, { ...NO_FILTER, wf: "0" });
    expect(ill.length).toBeGreaterThan(0);
    expect(ill.every((item) => item.wf === 0)).toBe(true);
  });

  it("filters by decision, including undecided", () => {
    const rejected = filterItems(items, { ...NO_FILTER, decision: "reject" });
    expect(rejected.every((item) => item.decision?.decision === "reject")).toBe(
      true,
    );
    const undecided = filterItems(items, {
      ...NO_FILTER,
      decision: "undecided",
    });
    expect(undecided.every((item) => item.decision === null)).toBe(true);
  });

  it("sorts by any column with a stable id tiebreak", () => {
    const byReadings = sortItems(items, "readings", false);
    for (let i = 1; i < byReadings.length; i += 1) {
      expect(byReadings[i - 1].readings).toBeGreaterThanOrEqual(
        byReadings[i].readings,
      );
    }
    const byId = sortItems(items, "item-id");
    expect(byId.map((item) => item["item-id"])).toEqual(
      [...byId.map((item) => item["item-id"])].sort(),
    );
  });
});

describe("selection movement", () => {
  const ids = ["s-01", "s-02", "s-03"];

  it("clamps at both ends", () => {
    expect(moveSelection(ids, "s-01", -1)).toBe("s-01");
    expect(moveSelection(ids, "s-03", 1)).toBe("s-03");
    expect(moveSelection(ids, "s-02", 1)).toBe("s-03");
  });

  it("enters the list from either direction", () => {
    expect(moveSelection(ids, null, 1)).toBe("s-01");
    expect(moveSelection(ids, null, -1)).toBe("s-03");
    expect(moveSelection([], null, 1)).toBeNull();
  });
});

function summaries(...rows: Array<[string, DecisionRecord | null]>): ItemSummary[] {
  return rows.map(([id, decision]) => ({
    "item-id": id,
    "wf": 1,
    "sentence": id,
    "status": "parsed",
    "token-count": 2,
    "readings": 1,
    "gap-tokens": [],
    "decision": decision,
  }));
}

const accepted: DecisionRecord = {
  "item-id": "a",
  "decision": "accept",
  "reading-index": 0,
  "note": "",
};

describe("next undecided", () => {
  it("wraps around the list", () => {
    const list = summaries(["a", accepted], ["b", null], ["c", accepted], ["d", null]);
    expect(nextUndecided(list, "b")).toBe("d");
    expect(nextUndecided(list, "d")).toBe("b");
    expect(nextUndecided(list, null)).toBe("b");
  });

  it("returns null when everything is decided", () => {
    const list = summaries(["a", accepted]);
    expect(nextUndecided(list, "a")).toBeNull();
  });
});

describe("optimistic decisions", () => {
  const serverRecord: DecisionRecord = {
    "item-id": "a",
    "decision": "accept",
    "reading-index": 1,
    "note": "fine",
  };

  it("applies immediately and confirms with the server record", async () => {
    const states: Array<DecisionRecord | null> = [];
    const store = new ItemStore({
      postDecision: async () => serverRecord,
    });
    store.setItems(summaries(["a", null]));
    store.subscribe(() => states.push(store.get("a")!.decision));

    const outcome = await store.decide("a", {
      decision: "accept",
      readingIndex: 1,
      note: "fine",
    });
    expect(outcome.ok).toBe(true);
    // first notification is the optimistic write, second the confirmation
    expect(states[0]).toEqual({
      "item-id": "a",
      "decision": "accept",
      "reading-index": 1,
      "note": "fine",
    });
    expect(states[1]).toBe(serverRecord);
  });

  it("rolls back when the service refuses", async () => {
    const store = new ItemStore({
      postDecision: async () => {
        throw new ApiError(400, "accepting requires a reading index");
      },
    });
    store.setItems(summaries(["a", accepted]));

    const outcome = await store.decide("a", {
      decision: "accept",
      readingIndex: null,
      note: "",
    });
    expect(outcome).toEqual({
      ok: false,
      error: "accepting requires a reading index",
    });
    expect(store.get("a")!.decision).toBe(accepted);
    expect(store.readOnly).toBe(false);
  });

  it("latches read-only on 403", async () => {
    const store = new ItemStore({
      postDecision: async () => {
        throw new ApiError(403, "profile is read-only");
      },
    });
    store.setItems(summaries(["a", null]));

    const outcome = await store.decide("a", {
      decision: "reject",
      readingIndex: null,
      note: "",
    });
    expect(outcome.ok).toBe(false);
    expect(store.readOnly).toBe(true);
    expect(store.get("a")!.decision).toBeNull();
  });
});
