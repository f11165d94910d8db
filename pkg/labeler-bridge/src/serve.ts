/**
 * Serve a labeler over one of the two protocol transports:
 *  - http: JSON over POST /label
 *  - stdio: one JSON request per stdin line, one JSON response per stdout line
 *
 * Malformed input yields an {"error": ...} object (HTTP 400 / a normal
 * response line); the service keeps running either way.
 */

import * as http from "node:http";
import * as readline from "node:readline";
import type { Labeler } from "./labelers.js";
import { requestError, type LabelRequest } from "./protocol.js";

function answer(labeler: Labeler, body: unknown): {
  status: number;
  payload: object;
} {
  const problem = requestError(body);
  if (problem !== null) {
    return { status: 400, payload: { error: problem } };
  }
  const resp = labeler(body as LabelRequest);
  return { status: "error" in resp ? 400 : 200, payload: resp };
}

export function serveHttp(labeler: Labeler, port: number): Promise<http.Server> {
  const server = http.createServer((req, res) => {
    const respond = (status: number, payload: object) => {
      const body = JSON.stringify(payload);
      res.writeHead(status, { "Content-Type": "application/json" });
      res.end(body);
    };
    if (req.method !== "POST" || req.url !== "/label") {
      respond(404, { error: `no route ${req.method} ${req.url}` });
      return;
    }
    const chunks: Buffer[] = [];
    req.on("data", (chunk) => chunks.push(chunk));
    req.on("end", () => {
      let body: unknown;
      try {
        body = JSON.parse(Buffer.concat(chunks).toString("utf-8"));
      } catch (exc) {
        respond(400, { error: `malformed JSON: ${exc}` });
        return;
      }
      const { status, payload } = answer(labeler, body);
      respond(status, payload);
    });
  });
  return new Promise((resolve, reject) => {
    server.once("error", reject);
    server.listen(port, "127.0.0.1", () => resolve(server));
  });
}

export function serveStdio(
  labeler: Labeler,
  input: NodeJS.ReadableStream = process.stdin,
  output: NodeJS.WritableStream = process.stdout,
): Promise<void> {
  const rl = readline.createInterface({ input, terminal: false });
  return new Promise((resolve) => {
    rl.on("line", (line) => {
      if (!line.trim()) return;
      let body: unknown;
      try {
        body = JSON.parse(line);
      } catch (exc) {
        output.write(JSON.stringify({ error: `malformed JSON: ${exc}` }) + "\n");
        return;
      }
      output.write(JSON.stringify(answer(labeler, body).payload) + "\n");
    });
    rl.on("close", resolve);
  });
}
