/**
 * Tiny trainable node labeler: multinomial logistic regression over hashed
 * sparse features of (xpath, tag, text). Desk-scale stand-in for a heavy
 * markup-aware transformer — same wire contract, no GPU needed.
 */

import * as fs from "node:fs";
import type { NodeRef } from "./protocol.js";

export interface NodeModel {
  task: "segment" | "classify";
  dim: number;
  labels: string[];
  /** labels.length rows of dim weights, plus a bias per label */
  weights: number[][];
  bias: number[];
}

const DIM = 1 << 14;

/** FNV-1a over the feature string, folded into the weight dimension. */
function hash(feature: string, dim: number): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < feature.length; i++) {
    h ^= feature.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return (h >>> 0) % dim;
}

const DATE_HINT =
  /\d{1,2}[.\/-]\d{1,2}[.\/-]\d{2,4}|\d{4}-\d{2}-\d{2}|\bago\b|today|yesterday|january|february|march|april|may|june|july|august|september|october|november|december/i;

export function features(node: NodeRef): string[] {
  const steps = node.xpath
    .split("/")
    .slice(1)
    .map((s) => {
      const m = /^([a-z0-9-]+)\[(\d+)\]$/.exec(s);
      return m ? { tag: m[1], index: parseInt(m[2], 10) } : { tag: s, index: 1 };
    });
  const parent = steps.length > 1 ? steps[steps.length - 2] : undefined;
  const self = steps[steps.length - 1];
  const words = node.text.toLowerCase().split(/\s+/).filter(Boolean);
  const out = [
    `tag=${node.tag}`,
    `parent=${parent?.tag ?? "#none"}`,
    `tagpath=${steps.slice(-3).map((s) => s.tag).join(">")}`,
    `depth=${steps.length}`,
    `selfidx=${Math.min(self?.index ?? 1, 4)}`,
    `first=${self?.index === 1}`,
    `nwords=${Math.min(words.length, 8)}`,
    `digits=${/\d/.test(node.text)}`,
    `datehint=${DATE_HINT.test(node.text)}`,
    `short=${node.text.length <= 12}`,
  ];
  for (const word of words.slice(0, 4)) out.push(`w=${word}`);
  return out;
}

function scores(model: NodeModel, feats: string[]): number[] {
  const idx = feats.map((f) => hash(f, model.dim));
  return model.labels.map((_, k) => {
    let s = model.bias[k];
    for (const i of idx) s += model.weights[k][i];
    return s;
  });
}

function softmax(logits: number[]): number[] {
  const top = Math.max(...logits);
  const exps = logits.map((v) => Math.exp(v - top));
  const total = exps.reduce((a, b) => a + b, 0);
  return exps.map((e) => e / total);
}

export function predict(model: NodeModel, node: NodeRef): string {
  const s = scores(model, features(node));
  let best = 0;
  for (let k = 1; k < s.length; k++) if (s[k] > s[best]) best = k;
  return model.labels[best];
}

export interface Example {
  node: NodeRef;
  label: string;
}

export interface TrainOptions {
  epochs: number;
  learningRate: number;
  seed: number;
}

export const DEFAULT_TRAIN: TrainOptions = {
  epochs: 8,
  learningRate: 0.2,
  seed: 1,
};

/** Deterministic multiplicative-congruential shuffle. */
function shuffled<T>(items: T[], seed: number): T[] {
  const out = [...items];
  let state = seed >>> 0 || 1;
  for (let i = out.length - 1; i > 0; i--) {
    state = (Math.imul(state, 1664525) + 1013904223) >>> 0;
    const j = state % (i + 1);
    [out[i], out[j]] = [out[j], out[i]];
  }
  return out;
}

export interface TrainResult {
  model: NodeModel;
  /** mean cross-entropy per epoch */
  losses: number[];
}

export function train(
  task: NodeModel["task"],
  examples: Example[],
  options: TrainOptions = DEFAULT_TRAIN,
): TrainResult {
  const labels = [...new Set(examples.map((e) => e.label))].sort();
  const model: NodeModel = {
    task,
    dim: DIM,
    labels,
    weights: labels.map(() => new Array<number>(DIM).fill(0)),
    bias: labels.map(() => 0),
  };
  const labelIndex = new Map(labels.map((l, i) => [l, i]));
  const losses: number[] = [];
  for (let epoch = 0; epoch < options.epochs; epoch++) {
    let loss = 0;
    const lr = options.learningRate / (1 + epoch * 0.3);
    for (const ex of shuffled(examples, options.seed + epoch)) {
      const feats = features(ex.node);
      const idx = feats.map((f) => hash(f, model.dim));
      const probs = softmax(scores(model, feats));
      const gold = labelIndex.get(ex.label)!;
      loss -= Math.log(Math.max(probs[gold], 1e-12));
      for (let k = 0; k < labels.length; k++) {
        const grad = probs[k] - (k === gold ? 1 : 0);
        model.bias[k] -= lr * grad;
        for (const i of idx) model.weights[k][i] -= lr * grad;
      }
    }
    losses.push(loss / examples.length);
  }
  return { model, losses };
}

export function saveModel(model: NodeModel, path: string): void {
  fs.writeFileSync(path, JSON.stringify(model));
}

export function loadModel(path: string): NodeModel {
  const model = JSON.parse(fs.readFileSync(path, "utf-8")) as NodeModel;
  if (!model.labels || !model.weights || !model.dim) {
    throw new Error(`${path} is not a saved node-labeler model`);
  }
  return model;
}
