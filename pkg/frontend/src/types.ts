// Shapes mirror the profile service JSON verbatim, hyphenated keys and all.
// The UI never derives linguistic content or status on its own.

export interface RunInfo {
  "suite": string;
  "item-count": number;
  "grammar-version": string;
  "created-at": string;
  "options": Record<string, boolean>;
}

export type ItemStatus = "parsed" | "no-parse" | "lexical-gap";

export interface DecisionRecord {
  "item-id": string;
  "decision": "accept" | "reject";
  "reading-index": number | null;
  "note": string;
}

export interface ItemSummary {
  "item-id": string;
  "wf": number;
  "sentence": string;
  "status": ItemStatus;
  "token-count": number;
  "readings": number;
  "gap-tokens": string[];
  "decision": DecisionRecord | null;
}

export interface DerivationLeaf {
  label: string;
  token: string;
  tag: string;
}

export interface DerivationBranch {
  label: string;
  children: DerivationNode[];
}

export type DerivationNode = DerivationLeaf | DerivationBranch;

export function isLeaf(node: DerivationNode): node is DerivationLeaf {
  return !("children" in node);
}

export interface DmrsNode {
  id: number;
  predicate: string;
  sort: string;
  properties: Record<string, string>;
}

export interface DmrsLink {
  start: number;
  end: number;
  role: string;
  post: string;
}

export interface Dmrs {
  top: number | null;
  nodes: DmrsNode[];
  links: DmrsLink[];
}

// Entry in an item's reading-list; the dmrs rendering of a reading is
// served only by the per-reading route.
export interface ReadingSummary {
  "reading-index": number;
  "derivation": DerivationNode;
  "mrs": string;
}

export interface ReadingDetail extends ReadingSummary {
  "item-id": string;
  "dmrs": Dmrs;
}

export interface ItemDetail extends ItemSummary {
  "reading-list": ReadingSummary[];
}

export interface CompareRow {
  "item-id": string;
  "category": string;
}

export interface DecisionRequest {
  decision: "accept" | "reject";
  readingIndex: number | null;
  note: string;
}
