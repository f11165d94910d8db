/**
 * Node-labeling wire protocol shared with the extraction pipeline.
 *
 * Request:  {"task": "segment"|"classify", "context": "page"|"record",
 *            "page_id": str, "nodes": [{"xpath","tag","text"}]}
 * Response: {"labels": [{"xpath","label"}]}  or  {"error": str}
 */

export interface NodeRef {
  xpath: string;
  tag: string;
  text: string;
}

export interface LabelRequest {
  task: "segment" | "classify";
  context: "page" | "record";
  page_id: string;
  nodes: NodeRef[];
}

export interface NodeLabel {
  xpath: string;
  label: string;
}

export interface LabelResponse {
  labels: NodeLabel[];
}

export interface ErrorResponse {
  error: string;
}

export const SEGMENT_LABELS = ["BEGIN", "OUT"] as const;
export const CLASSIFY_LABELS = ["title", "tag", "date", "out"] as const;

export function labelSet(task: LabelRequest["task"]): readonly string[] {
  return task === "segment" ? SEGMENT_LABELS : CLASSIFY_LABELS;
}

/** Validate an incoming request; returns an error message or null. */
export function requestError(body: unknown): string | null {
  if (typeof body !== "object" || body === null || Array.isArray(body)) {
    return "request must be a JSON object";
  }
  const req = body as Record<string, unknown>;
  if (req.task !== "segment" && req.task !== "classify") {
    return `unknown task ${JSON.stringify(req.task)}`;
  }
  if (req.context !== "page" && req.context !== "record") {
    return `unknown context ${JSON.stringify(req.context)}`;
  }
  if (typeof req.page_id !== "string") {
    return "page_id must be a string";
  }
  if (!Array.isArray(req.nodes)) {
    return "nodes must be an array";
  }
  for (const node of req.nodes) {
    if (typeof node !== "object" || node === null) {
      return "each node must be an object";
    }
    const n = node as Record<string, unknown>;
    if (
      typeof n.xpath !== "string" ||
      typeof n.tag !== "string" ||
      typeof n.text !== "string"
    ) {
      return "each node needs string xpath, tag, and text";
    }
  }
  return null;
}

/**
 * Check that a response only labels xpaths from the request, using the
 * task's label set. Internal self-check mirroring the client's validation.
 */
export function responseError(
  req: LabelRequest,
  resp: LabelResponse,
): string | null {
  const known = new Set(req.nodes.map((n) => n.xpath));
  const allowed = new Set(labelSet(req.task));
  for (const { xpath, label } of resp.labels) {
    if (!allowed.has(label)) return `label ${JSON.stringify(label)} not in task set`;
    if (!known.has(xpath)) return `xpath ${JSON.stringify(xpath)} not in request`;
  }
  return null;
}
