import { describe, expect, it } from "vitest";
import { renderDmrs } from "../src/dmrs";
import type { ReadingDetail } from "../src/types";
import spuriousFixture from "./fixtures/reading-s-14-0.json";

const reading = spuriousFixture as unknown as ReadingDetail;

describe("dmrs graph", () => {
  const svg = renderDmrs(reading.dmrs);

  it("lays nodes out left to right in served order", () => {
    const nodes = [...svg.querySelectorAll(".dmrs-node")];
    expect(nodes.map((n) => n.getAttribute("data-predicate"))).toEqual([
      "_mi_q",
      "_abuelo_n",
      "_ser_v",
      "_persona_n",
      "_udef_q",
      "_famoso_a",
    ]);
    const columns = nodes.map((n) => Number(n.getAttribute("data-column")));
    expect(columns).toEqual([0, 1, 2, 3, 4, 5]);
    const xs = nodes.map((n) => Number(n.querySelector("rect")!.getAttribute("x")));
    for (let i = 1; i < xs.length; i += 1) {
      expect(xs[i]).toBeGreaterThan(xs[i - 1]);
    }
  });

  it("labels every link role/post and keeps direction", () => {
    const links = [...svg.querySelectorAll(".dmrs-link")];
    const seen = links.map((link) => ({
      from: Number(link.getAttribute("data-from")),
      to: Number(link.getAttribute("data-to")),
      label: link.querySelector("text")!.textContent,
    }));
    expect(seen).toEqual([
      { from: 0, to: 1, label: "RSTR/H" },
      { from: 2, to: 1, label: "ARG1/NEQ" },
      { from: 2, to: 3, label: "ARG2/NEQ" },
      { from: 4, to: 3, label: "RSTR/H" },
      { from: 5, to: 1, label: "ARG1/NEQ" },
    ]);
    for (const link of links) {
      const path = link.querySelector("path")!;
      expect(path.getAttribute("marker-end")).toBe("url(#dmrs-arrow)");
    }
  });

  it("marks the top node", () => {
    const top = svg.querySelector('.dmrs-node[data-top="true"]');
    expect(top).not.toBeNull();
    expect(top!.getAttribute("data-predicate")).toBe("_ser_v");
    expect(top!.querySelector(".dmrs-top-label")!.textContent).toBe("TOP");
    expect(svg.querySelectorAll('[data-top="true"]')).toHaveLength(1);
  });

  it("shows node properties as served", () => {
    const verb = svg.querySelector('.dmrs-node[data-predicate="_ser_v"]')!;
    expect(verb.querySelector(".dmrs-node-label")!.textContent).toBe(
      "_ser_v TENSE=pres",
    );
  });
});
