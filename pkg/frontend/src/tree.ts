import { isLeaf, type DerivationNode } from "./types";

// Renders a derivation exactly as served: every label and token comes from
// the API payload, and the nesting mirrors the tree structure one-to-one.
export function renderDerivation(node: DerivationNode): HTMLElement {
  if (isLeaf(node)) {
    const leaf = document.createElement("span");
    leaf.className = "deriv-leaf";
    leaf.dataset.label = node.label;
    leaf.dataset.token = node.token;

    const token = document.createElement("span");
    token.className = "deriv-token";
    token.textContent = node.token;
    leaf.appendChild(token);

    const entry = document.createElement("small");
    entry.className = "deriv-entry";
    entry.textContent = `${node.label}/${node.tag}`;
    leaf.appendChild(entry);
    return leaf;
  }

  const box = document.createElement("details");
  box.className = "deriv-node";
  box.dataset.label = node.label;
  box.open = true;

  const summary = document.createElement("summary");
  summary.textContent = node.label;
  box.appendChild(summary);

  const children = document.createElement("div");
  children.className = "deriv-children";
  for (const child of node.children) {
    children.appendChild(renderDerivation(child));
  }
  box.appendChild(children);
  return box;
}

// Left-to-right surface tokens of a derivation, for captions and tests.
export function yieldTokens(node: DerivationNode): string[] {
  if (isLeaf(node)) return [node.token];
  return node.children.flatMap(yieldTokens);
}
