/**
 * The three labeling backends behind the wire protocol:
 *  - oracle: answers from corpus annotations (integration-test ground truth)
 *  - constant: everything OUT/out (a floor baseline)
 *  - model: a trained node labeler
 */

import type { AnnotationStore } from "./annotations.js";
import { loadModel, predict, type NodeModel } from "./model.js";
import type { ErrorResponse, LabelRequest, LabelResponse } from "./protocol.js";

export type Labeler = (req: LabelRequest) => LabelResponse | ErrorResponse;

export function oracleLabeler(store: AnnotationStore): Labeler {
  return (req) => {
    const page = store.get(req.page_id);
    if (!page) {
      return { error: `no annotations for page ${JSON.stringify(req.page_id)}` };
    }
    const labels = req.nodes.map((node) => {
      if (req.task === "segment") {
        return {
          xpath: node.xpath,
          label: page.boundaries.has(node.xpath) ? "BEGIN" : "OUT",
        };
      }
      return {
        xpath: node.xpath,
        label: page.attrLabels.get(node.xpath) ?? "out",
      };
    });
    return { labels };
  };
}

export function constantLabeler(): Labeler {
  return (req) => ({
    labels: req.nodes.map((node) => ({
      xpath: node.xpath,
      label: req.task === "segment" ? "OUT" : "out",
    })),
  });
}

export function modelLabeler(model: NodeModel): Labeler {
  return (req) => {
    if (model.task !== req.task) {
      return {
        error: `model was trained for task ${model.task}, got ${req.task}`,
      };
    }
    return {
      labels: req.nodes.map((node) => ({
        xpath: node.xpath,
        label: predict(model, node),
      })),
    };
  };
}

export interface LabelerMode {
  mode: "oracle" | "constant" | "model";
  annotationDir?: string;
  modelPath?: string;
}

export async function makeLabeler(mode: LabelerMode): Promise<Labeler> {
  switch (mode.mode) {
    case "constant":
      return constantLabeler();
    case "oracle": {
      if (!mode.annotationDir) {
        throw new Error("oracle mode requires --annotations");
      }
      const { AnnotationStore } = await import("./annotations.js");
      return oracleLabeler(new AnnotationStore(mode.annotationDir));
    }
    case "model": {
      if (!mode.modelPath) {
        throw new Error("model mode requires --model");
      }
      return modelLabeler(loadModel(mode.modelPath));
    }
  }
}
