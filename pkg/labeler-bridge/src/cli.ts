#!/usr/bin/env node
/**
 * labeler-bridge CLI.
 *
 *   serve --mode oracle|constant|model --transport http|stdio
 *         [--annotations DIR] [--model FILE] [--port N]
 *   train --corpus DIR --task segment|classify --out FILE
 *         [--epochs N] [--lr F] [--seed N]
 */

import { parseArgs } from "node:util";
import { makeLabeler } from "./labelers.js";
import { saveModel } from "./model.js";
import { serveHttp, serveStdio } from "./serve.js";
import { finetuneNodeLabeler } from "./train.js";

function usageError(message: string): never {
  process.stderr.write(message + "\n");
  process.exit(2);
}

async function cmdServe(argv: string[]): Promise<void> {
  const { values } = parseArgs({
    args: argv,
    options: {
      mode: { type: "string", default: "oracle" },
      transport: { type: "string", default: "stdio" },
      annotations: { type: "string" },
      model: { type: "string" },
      port: { type: "string", default: "8700" },
    },
  });
  const mode = values.mode!;
  if (mode !== "oracle" && mode !== "constant" && mode !== "model") {
    usageError(`unknown mode ${mode}`);
  }
  const labeler = await makeLabeler({
    mode,
    annotationDir: values.annotations,
    modelPath: values.model,
  });
  if (values.transport === "http") {
    const port = parseInt(values.port!, 10);
    await serveHttp(labeler, port);
    process.stderr.write(`listening on http://127.0.0.1:${port}/label\n`);
    await new Promise(() => {});
  } else if (values.transport === "stdio") {
    await serveStdio(labeler);
  } else {
    usageError(`unknown transport ${values.transport}`);
  }
}

async function cmdTrain(argv: string[]): Promise<void> {
  const { values } = parseArgs({
    args: argv,
    options: {
      corpus: { type: "string" },
      task: { type: "string", default: "segment" },
      out: { type: "string" },
      epochs: { type: "string", default: "8" },
      lr: { type: "string", default: "0.2" },
      seed: { type: "string", default: "1" },
    },
  });
  if (!values.corpus || !values.out) {
    usageError("train requires --corpus and --out");
  }
  const task = values.task!;
  if (task !== "segment" && task !== "classify") {
    usageError(`unknown task ${task}`);
  }
  const { model, losses } = finetuneNodeLabeler(values.corpus, task, {
    epochs: parseInt(values.epochs!, 10),
    learningRate: parseFloat(values.lr!),
    seed: parseInt(values.seed!, 10),
  });
  saveModel(model, values.out);
  process.stderr.write(
    `trained ${task} labeler: loss ${losses[0].toFixed(4)} -> ` +
      `${losses[losses.length - 1].toFixed(4)} over ${losses.length} epochs\n`,
  );
}

async function main(): Promise<void> {
  const [command, ...rest] = process.argv.slice(2);
  if (command === "serve") return cmdServe(rest);
  if (command === "train") return cmdTrain(rest);
  usageError("usage: labeler-bridge <serve|train> [options]");
}

main().catch((exc) => {
  process.stderr.write(String(exc) + "\n");
  process.exit(1);
});
