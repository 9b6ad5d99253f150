import type { ApiClient } from "./api";
import { renderDmrs } from "./dmrs";
import {
  filterItems,
  ItemStore,
  moveSelection,
  nextUndecided,
  NO_FILTER,
  sortItems,
  type ItemFilter,
  type SortKey,
} from "./state";
import { renderDerivation, yieldTokens } from "./tree";
import type { ItemDetail, ItemSummary, ReadingDetail } from "./types";

export interface AppHandle {
  ready: Promise<void>;
  store: ItemStore;
  selectItem(itemId: string): Promise<void>;
  showReading(index: number): Promise<void>;
  decide(decision: "accept" | "reject"): Promise<void>;
}

const STATUS_CHOICES = ["all", "parsed", "no-parse", "lexical-gap"] as const;
const DECISION_CHOICES = ["all", "accept", "reject", "undecided"] as const;
const COLUMNS: Array<[SortKey | null, string]> = [
  ["item-id", "item"],
  ["wf", "wf"],
  [null, "sentence"],
  ["status", "status"],
  ["readings", "readings"],
  [null, "decision"],
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function decisionCell(item: ItemSummary): string {
  const decision = item.decision;
  if (decision === null) return "undecided";
  const index = decision["reading-index"];
  return index === null
    ? decision.decision
    : `${decision.decision} #${index}`;
}

export function initApp(root: HTMLElement, api: ApiClient): AppHandle {
  const store = new ItemStore(api);
  let filter: ItemFilter = { ...NO_FILTER };
  let sortKey: SortKey = "item-id";
  let sortAscending = true;
  let selectedId: string | null = null;
  let detail: ItemDetail | null = null;
  let currentReading: ReadingDetail | null = null;
  let readingIndex = 0;

  root.innerHTML = "";
  const banner = el("div", "error-banner");
  banner.hidden = true;
  const header = el("header", "run-header");
  const title = el("h1", "", "treebank");
  const meta = el("span", "run-meta");
  header.append(title, meta);

  const filters = el("div", "filters");
  const statusSelect = el("select", "filter-status");
  for (const choice of STATUS_CHOICES) {
    statusSelect.append(new Option(choice, choice));
  }
  const wfSelect = el("select", "filter-wf");
  for (const choice of ["all", "1", "0"]) {
    wfSelect.append(new Option(choice === "all" ? "all" : `wf=${choice}`, choice));
  }
  const decisionSelect = el("select", "filter-decision");
  for (const choice of DECISION_CHOICES) {
    decisionSelect.append(new Option(choice, choice));
  }
  filters.append(statusSelect, wfSelect, decisionSelect);

  const table = el("table", "item-table");
  const thead = el("thead");
  const headRow = el("tr");
  for (const [key, caption] of COLUMNS) {
    const th = el("th", key ? "sortable" : "", caption);
    if (key) {
      th.addEventListener("click", () => {
        sortAscending = sortKey === key ? !sortAscending : true;
        sortKey = key;
        renderTable();
      });
    }
    headRow.appendChild(th);
  }
  thead.appendChild(headRow);
  const tbody = el("tbody");
  table.append(thead, tbody);

  const listPanel = el("section", "item-panel");
  listPanel.append(filters, table);
  const detailPanel = el("section", "detail-panel");
  detailPanel.append(el("p", "placeholder", "select an item"));
  const main = el("main", "layout");
  main.append(listPanel, detailPanel);
  root.append(banner, header, main);

  function showError(message: string): void {
    banner.textContent = message;
    banner.hidden = false;
  }

  function clearError(): void {
    banner.hidden = true;
    banner.textContent = "";
  }

  function visibleItems(): ItemSummary[] {
    return sortItems(filterItems(store.items, filter), sortKey, sortAscending);
  }

  function renderTable(): void {
    tbody.innerHTML = "";
    for (const item of visibleItems()) {
      const row = el("tr");
      row.dataset.itemId = item["item-id"];
      if (item.decision === null) row.classList.add("undecided");
      if (item["item-id"] === selectedId) row.classList.add("selected");
      row.append(
        el("td", "cell-id", item["item-id"]),
        el("td", "cell-wf", String(item.wf)),
        el("td", "cell-sentence", item.sentence),
        el("td", `cell-status status-${item.status}`, item.status),
        el("td", "cell-readings", String(item.readings)),
        el("td", "cell-decision", decisionCell(item)),
      );
      row.addEventListener("click", () => void selectItem(item["item-id"]));
      tbody.appendChild(row);
    }
  }

  function renderDetail(): void {
    detailPanel.innerHTML = "";
    if (detail === null) {
      detailPanel.append(el("p", "placeholder", "select an item"));
      return;
    }
    const item = store.get(detail["item-id"]) ?? detail;

    const heading = el("h2", "item-heading", detail["item-id"]);
    heading.append(el("span", `status status-${item.status}`, ` ${item.status}`));
    const sentence = el("p", "item-sentence", item.sentence);
    detailPanel.append(heading, sentence);
    if (item["gap-tokens"].length > 0) {
      detailPanel.append(
        el("p", "gap-tokens", `unknown tokens: ${item["gap-tokens"].join(", ")}`),
      );
    }

    const decisionState = el(
      "p",
      "decision-state",
      item.decision === null ? "undecided" : decisionCell(item),
    );
    detailPanel.append(decisionState);

    const readings = detail["reading-list"];
    if (readings.length === 0) {
      detailPanel.append(el("p", "no-readings", "no readings"));
      return;
    }

    const nav = el("div", "reading-nav");
    const prev = el("button", "reading-prev", "prev");
    const next = el("button", "reading-next", "next");
    prev.disabled = readings.length === 1 || readingIndex === 0;
    next.disabled = readings.length === 1 || readingIndex === readings.length - 1;
    prev.addEventListener("click", () => void showReading(readingIndex - 1));
    next.addEventListener("click", () => void showReading(readingIndex + 1));
    const counter = el(
      "span",
      "reading-counter",
      `reading ${readingIndex} of ${readings.length}`,
    );
    nav.append(prev, counter, next);
    detailPanel.append(nav);

    const controls = el("div", "decision-controls");
    const accept = el("button", "decide-accept", `accept reading ${readingIndex}`);
    const reject = el("button", "decide-reject", "reject item");
    const note = el("input", "decision-note");
    note.placeholder = "note";
    accept.disabled = store.readOnly;
    reject.disabled = store.readOnly;
    note.disabled = store.readOnly;
    accept.addEventListener("click", () => void decide("accept"));
    reject.addEventListener("click", () => void decide("reject"));
    controls.append(accept, reject, note);
    if (store.readOnly) {
      controls.append(el("span", "read-only-flag", "read-only"));
    }
    detailPanel.append(controls);

    if (currentReading === null) {
      detailPanel.append(el("p", "reading-missing", "reading unavailable"));
      return;
    }
    const view = el("div", "reading-view");
    const derivation = el("div", "derivation");
    derivation.append(renderDerivation(currentReading.derivation));
    derivation.append(
      el("p", "derivation-yield", yieldTokens(currentReading.derivation).join(" ")),
    );
    const mrs = el("pre", "mrs-text", currentReading.mrs);
    const dmrs = el("div", "dmrs");
    dmrs.append(renderDmrs(currentReading.dmrs));
    view.append(derivation, mrs, dmrs);
    detailPanel.append(view);
  }

  // Pulls the full reading (derivation, MRS, DMRS) from the per-reading
  // route; a stale index after a re-run surfaces the service's 404.
  async function loadReading(itemId: string, index: number): Promise<boolean> {
    try {
      currentReading = await api.getReading(itemId, index);
      readingIndex = index;
      clearError();
      return true;
    } catch (err) {
      showError(err instanceof Error ? err.message : String(err));
      return false;
    }
  }

  async function selectItem(itemId: string): Promise<void> {
    try {
      detail = await api.getItem(itemId);
      selectedId = itemId;
      readingIndex = 0;
      currentReading = null;
      clearError();
    } catch (err) {
      showError(err instanceof Error ? err.message : String(err));
      return;
    }
    if (detail["reading-list"].length > 0) {
      await loadReading(itemId, 0);
    }
    renderTable();
    renderDetail();
  }

  async function showReading(index: number): Promise<void> {
    if (detail === null || index < 0) return;
    if (index >= detail["reading-list"].length) return;
    if (await loadReading(detail["item-id"], index)) {
      renderDetail();
    }
  }

  async function decide(decision: "accept" | "reject"): Promise<void> {
    if (detail === null || store.readOnly) return;
    const noteInput = detailPanel.querySelector<HTMLInputElement>(".decision-note");
    const outcome = await store.decide(detail["item-id"], {
      decision,
      readingIndex: decision === "accept" ? readingIndex : null,
      note: noteInput?.value ?? "",
    });
    if (!outcome.ok) {
      showError(outcome.error ?? "decision rejected");
      return;
    }
    clearError();
    const next = nextUndecided(visibleItems(), selectedId);
    if (next !== null && next !== selectedId) {
      await selectItem(next);
    } else {
      renderDetail();
    }
  }

  function onFilterChange(): void {
    filter = {
      status: statusSelect.value as ItemFilter["status"],
      wf: wfSelect.value as ItemFilter["wf"],
      decision: decisionSelect.value as ItemFilter["decision"],
    };
    renderTable();
  }
  statusSelect.addEventListener("change", onFilterChange);
  wfSelect.addEventListener("change", onFilterChange);
  decisionSelect.addEventListener("change", onFilterChange);

  root.addEventListener("keydown", (event) => {
    if (event.target instanceof HTMLInputElement) return;
    const ids = visibleItems().map((item) => item["item-id"]);
    if (event.key === "j" || event.key === "ArrowDown") {
      const next = moveSelection(ids, selectedId, 1);
      if (next !== null) void selectItem(next);
      event.preventDefault();
    } else if (event.key === "k" || event.key === "ArrowUp") {
      const next = moveSelection(ids, selectedId, -1);
      if (next !== null) void selectItem(next);
      event.preventDefault();
    } else if (event.key === "n") {
      void showReading(readingIndex + 1);
    } else if (event.key === "p") {
      void showReading(readingIndex - 1);
    } else if (event.key === "a") {
      void decide("accept");
    } else if (event.key === "x") {
      void decide("reject");
    }
  });

  store.subscribe(() => {
    renderTable();
    if (detail !== null) renderDetail();
  });

  const ready = (async () => {
    try {
      const run = await api.getRun();
      title.textContent = `${run.suite} — ${run["item-count"]} items`;
      const flags = Object.entries(run.options)
        .map(([name, value]) => `${name}=${value ? "on" : "off"}`)
        .join("  ");
      meta.textContent = `grammar ${run["grammar-version"].slice(0, 12)}  ${flags}`;
      store.setItems(await api.listItems());
      clearError();
    } catch (err) {
      showError(err instanceof Error ? err.message : String(err));
    }
  })();

  return { ready, store, selectItem, showReading, decide };
}
