/**
 * Protocol conformance over both transports with the oracle backend:
 * labels stay in the task set, only request xpaths are answered, malformed
 * input yields an error object without killing the service, and both
 * transports return bit-identical responses.
 */

import { spawn, type ChildProcess } from "node:child_process";
import * as fs from "node:fs";
import * as http from "node:http";
import * as path from "node:path";
import * as readline from "node:readline";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { AnnotationStore } from "../src/annotations.js";
import { textNodes } from "../src/html.js";
import { oracleLabeler } from "../src/labelers.js";
import { labelSet, type LabelRequest } from "../src/protocol.js";
import { serveHttp } from "../src/serve.js";

const CORPUS = path.join(__dirname, "fixtures", "corpus");
const CLI = path.join(__dirname, "..", "dist", "cli.js");
const store = new AnnotationStore(CORPUS);

function pageRequest(pageId: string, task: LabelRequest["task"]): LabelRequest {
  const page = store.get(pageId)!;
  const html = fs.readFileSync(path.join(CORPUS, page.htmlFile), "utf-8");
  return { task, context: "page", page_id: pageId, nodes: textNodes(html) };
}

let server: http.Server;
let port: number;
let child: ChildProcess;
let childLines: AsyncIterableIterator<string>;

async function httpCall(raw: string): Promise<{ status: number; body: any }> {
  const resp = await fetch(`http://127.0.0.1:${port}/label`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: raw,
  });
  return { status: resp.status, body: await resp.json() };
}

async function stdioCall(raw: string): Promise<any> {
  child.stdin!.write(raw.replace(/\n/g, " ") + "\n");
  const { value } = await childLines.next();
  return JSON.parse(value!);
}

beforeAll(async () => {
  server = await serveHttp(oracleLabeler(store), 0);
  port = (server.address() as { port: number }).port;
  child = spawn(
    process.execPath,
    [CLI, "serve", "--mode", "oracle", "--transport", "stdio", "--annotations", CORPUS],
    { stdio: ["pipe", "pipe", "inherit"] },
  );
  childLines = readline
    .createInterface({ input: child.stdout!, terminal: false })
    [Symbol.asyncIterator]();
});

afterAll(async () => {
  server.close();
  child.stdin!.end();
  child.kill();
});

describe("conformance on both transports", () => {
  it("answers valid requests with task-set labels over request xpaths", async () => {
    for (const task of ["segment", "classify"] as const) {
      const req = pageRequest(store.pageIds()[1], task);
      const raw = JSON.stringify(req);
      const allowed = new Set(labelSet(task));
      const known = new Set(req.nodes.map((n) => n.xpath));
      for (const body of [(await httpCall(raw)).body, await stdioCall(raw)]) {
        expect(body.labels).toHaveLength(req.nodes.length);
        for (const { xpath, label } of body.labels) {
          expect(allowed.has(label)).toBe(true);
          expect(known.has(xpath)).toBe(true);
        }
      }
    }
  });

  it("returns identical payloads on http and stdio", async () => {
    for (const pageId of store.pageIds().slice(0, 8)) {
      const raw = JSON.stringify(pageRequest(pageId, "segment"));
      const viaHttp = (await httpCall(raw)).body;
      const viaStdio = await stdioCall(raw);
      expect(JSON.stringify(viaStdio)).toBe(JSON.stringify(viaHttp));
    }
  });

  it("survives malformed JSON with an error object", async () => {
    const bad = "{not json";
    const httpResp = await httpCall(bad);
    expect(httpResp.status).toBe(400);
    expect(httpResp.body).toHaveProperty("error");
    expect(await stdioCall(bad)).toHaveProperty("error");
    // both transports still answer afterwards
    const good = JSON.stringify(pageRequest(store.pageIds()[0], "segment"));
    expect((await httpCall(good)).body).toHaveProperty("labels");
    expect(await stdioCall(good)).toHaveProperty("labels");
  });

  it("rejects structurally invalid requests with an error object", async () => {
    const invalid = JSON.stringify({ task: "translate", nodes: [] });
    const httpResp = await httpCall(invalid);
    expect(httpResp.status).toBe(400);
    expect(httpResp.body.error).toContain("task");
    expect((await stdioCall(invalid)).error).toContain("task");
  });

  it("rejects unknown routes on http", async () => {
    const resp = await fetch(`http://127.0.0.1:${port}/labels`, {
      method: "POST",
      body: "{}",
    });
    expect(resp.status).toBe(404);
    expect(await resp.json()).toHaveProperty("error");
  });
});
