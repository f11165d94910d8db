/**
 * Build a node-labeled training set from an annotated corpus directory
 * (page HTML + annotation JSON pairs) and fit the tiny node labeler.
 *
 * Targets per text-bearing element:
 *  - segment task: BEGIN on record boundary nodes, OUT elsewhere
 *  - classify task: the annotated attribute label, "out" elsewhere
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { AnnotationStore } from "./annotations.js";
import { textNodes } from "./html.js";
import {
  DEFAULT_TRAIN,
  train,
  type Example,
  type TrainOptions,
  type TrainResult,
} from "./model.js";

export class DataError extends Error {}

export type Task = "segment" | "classify";

export function buildExamples(
  corpusDir: string,
  task: Task,
  pageIds?: string[],
): Example[] {
  const store = new AnnotationStore(corpusDir);
  const ids = pageIds ?? store.pageIds();
  const examples: Example[] = [];
  for (const pageId of ids) {
    const page = store.get(pageId);
    if (!page) throw new DataError(`unknown page ${pageId}`);
    const html = fs.readFileSync(path.join(corpusDir, page.htmlFile), "utf-8");
    const nodes = textNodes(html);
    const present = new Set(nodes.map((n) => n.xpath));
    const referenced =
      task === "segment" ? [...page.boundaries] : [...page.attrLabels.keys()];
    for (const xpath of referenced) {
      if (!present.has(xpath)) {
        throw new DataError(`${pageId}: annotated xpath not in page: ${xpath}`);
      }
    }
    for (const node of nodes) {
      const label =
        task === "segment"
          ? page.boundaries.has(node.xpath)
            ? "BEGIN"
            : "OUT"
          : page.attrLabels.get(node.xpath) ?? "out";
      examples.push({ node, label });
    }
  }
  return examples;
}

export function finetuneNodeLabeler(
  corpusDir: string,
  task: Task,
  options: Partial<TrainOptions> = {},
  pageIds?: string[],
): TrainResult {
  const examples = buildExamples(corpusDir, task, pageIds);
  if (examples.length === 0) throw new DataError("empty training set");
  return train(task, examples, { ...DEFAULT_TRAIN, ...options });
}
