import * as fs from "node:fs";
import * as path from "node:path";
import { describe, expect, it } from "vitest";
import { AnnotationStore } from "../src/annotations.js";
import { textNodes } from "../src/html.js";
import { constantLabeler, modelLabeler, oracleLabeler } from "../src/labelers.js";
import { train } from "../src/model.js";
import type { LabelRequest, LabelResponse } from "../src/protocol.js";

const CORPUS = path.join(__dirname, "fixtures", "corpus");
const store = new AnnotationStore(CORPUS);

function pageRequest(pageId: string, task: LabelRequest["task"]): LabelRequest {
  const page = store.get(pageId)!;
  const html = fs.readFileSync(path.join(CORPUS, page.htmlFile), "utf-8");
  return {
    task,
    context: "page",
    page_id: pageId,
    nodes: textNodes(html),
  };
}

describe("oracleLabeler", () => {
  const oracle = oracleLabeler(store);

  it("marks exactly the boundary nodes BEGIN", () => {
    for (const pageId of store.pageIds().slice(0, 5)) {
      const resp = oracle(pageRequest(pageId, "segment")) as LabelResponse;
      const begins = resp.labels
        .filter((l) => l.label === "BEGIN")
        .map((l) => l.xpath);
      expect(new Set(begins)).toEqual(store.get(pageId)!.boundaries);
    }
  });

  it("reproduces attribute annotations, everything else out", () => {
    const pageId = store.pageIds()[0];
    const resp = oracle(pageRequest(pageId, "classify")) as LabelResponse;
    const page = store.get(pageId)!;
    for (const { xpath, label } of resp.labels) {
      expect(label).toBe(page.attrLabels.get(xpath) ?? "out");
    }
    const labeled = resp.labels.filter((l) => l.label !== "out");
    expect(labeled).toHaveLength(page.attrLabels.size);
  });

  it("errors on pages without annotations", () => {
    const req = { ...pageRequest(store.pageIds()[0], "segment"), page_id: "nope" };
    expect(oracle(req)).toHaveProperty("error");
  });
});

describe("constantLabeler", () => {
  it("answers OUT/out for every node", () => {
    const constant = constantLabeler();
    const pageId = store.pageIds()[0];
    const seg = constant(pageRequest(pageId, "segment")) as LabelResponse;
    expect(seg.labels.every((l) => l.label === "OUT")).toBe(true);
    const cls = constant(pageRequest(pageId, "classify")) as LabelResponse;
    expect(cls.labels.every((l) => l.label === "out")).toBe(true);
  });
});

describe("modelLabeler", () => {
  it("rejects requests for the wrong task", () => {
    const { model } = train("segment", [
      {
        node: { xpath: "/html[1]/body[1]/p[1]", tag: "p", text: "x" },
        label: "OUT",
      },
    ]);
    const resp = modelLabeler(model)(pageRequest(store.pageIds()[0], "classify"));
    expect(resp).toHaveProperty("error");
  });
});
