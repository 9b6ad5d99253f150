import type { Dmrs, DmrsNode } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const COL_WIDTH = 130;
const BASELINE = 40;
const NODE_HEIGHT = 34;
const ARC_UNIT = 26;

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  return el;
}

function nodeCaption(node: DmrsNode): string {
  const props = Object.entries(node.properties)
    .map(([key, value]) => `${key}=${value}`)
    .join(" ");
  return props ? `${node.predicate} ${props}` : node.predicate;
}

// Draws the graph exactly as served: node order is the server's surface
// order (left to right), every link is labeled role/post, and the top
// node is flagged.  No linguistic content is computed here.
export function renderDmrs(graph: Dmrs): SVGSVGElement {
  const positions = new Map<number, number>();
  graph.nodes.forEach((node, column) => {
    positions.set(node.id, column);
  });

  const maxSpan = Math.max(
    1,
    ...graph.links.map((link) =>
      Math.abs(positions.get(link.end)! - positions.get(link.start)!),
    ),
  );
  const arcSpace = maxSpan * ARC_UNIT + 24;
  const width = graph.nodes.length * COL_WIDTH + 20;
  const height = arcSpace + BASELINE + NODE_HEIGHT + 30;

  const svg = svgElement("svg", {
    class: "dmrs-graph",
    viewBox: `0 0 ${width} ${height}`,
    width: String(width),
    height: String(height),
  });

  const defs = svgElement("defs", {});
  const marker = svgElement("marker", {
    id: "dmrs-arrow",
    viewBox: "0 0 8 8",
    refX: "7",
    refY: "4",
    markerWidth: "7",
    markerHeight: "7",
    orient: "auto-start-reverse",
  });
  marker.appendChild(svgElement("path", { d: "M 0 0 L 8 4 L 0 8 z" }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  const centerX = (column: number) => column * COL_WIDTH + COL_WIDTH / 2 + 10;
  const nodeTop = arcSpace;

  for (const link of graph.links) {
    const from = positions.get(link.start)!;
    const to = positions.get(link.end)!;
    const x1 = centerX(from);
    const x2 = centerX(to);
    const span = Math.abs(to - from);
    const peak = nodeTop - 10 - span * ARC_UNIT;

    const group = svgElement("g", {
      class: "dmrs-link",
      "data-from": String(link.start),
      "data-to": String(link.end),
      "data-role": link.role,
      "data-post": link.post,
    });
    group.appendChild(
      svgElement("path", {
        d: `M ${x1} ${nodeTop - 2} C ${x1} ${peak}, ${x2} ${peak}, ${x2} ${nodeTop - 2}`,
        fill: "none",
        "marker-end": "url(#dmrs-arrow)",
      }),
    );
    const label = svgElement("text", {
      class: "dmrs-link-label",
      x: String((x1 + x2) / 2),
      y: String(peak + 8),
      "text-anchor": "middle",
    });
    label.textContent = `${link.role}/${link.post}`;
    group.appendChild(label);
    svg.appendChild(group);
  }

  graph.nodes.forEach((node, column) => {
    const x = centerX(column);
    const group = svgElement("g", {
      class: "dmrs-node",
      "data-id": String(node.id),
      "data-predicate": node.predicate,
      "data-column": String(column),
    });
    if (graph.top === node.id) {
      group.setAttribute("data-top", "true");
      const topMark = svgElement("text", {
        class: "dmrs-top-label",
        x: String(x),
        y: String(nodeTop + NODE_HEIGHT + 22),
        "text-anchor": "middle",
      });
      topMark.textContent = "TOP";
      group.appendChild(topMark);
    }
    group.appendChild(
      svgElement("rect", {
        x: String(x - COL_WIDTH / 2 + 8),
        y: String(nodeTop),
        width: String(COL_WIDTH - 16),
        height: String(NODE_HEIGHT),
        rx: "6",
      }),
    );
    const text = svgElement("text", {
      class: "dmrs-node-label",
      x: String(x),
      y: String(nodeTop + NODE_HEIGHT / 2 + 4),
      "text-anchor": "middle",
    });
    text.textContent = nodeCaption(node);
    const title = svgElement("title", {});
    title.textContent = `${node.predicate} (${node.sort})`;
    group.appendChild(title);
    group.appendChild(text);
    svg.appendChild(group);
  });

  return svg;
}
