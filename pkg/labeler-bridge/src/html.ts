/**
 * Minimal parser for well-formed HTML (balanced tags, as produced by the
 * corpus generator): yields every element with its positional xpath and
 * whitespace-collapsed direct text. Positional xpaths use 1-based
 * same-tag sibling indices, e.g. /html[1]/body[1]/ul[1]/li[2].
 *
 * Not a general lenient parser — training and evaluation corpora are
 * machine-written, so unbalanced markup is treated as a data error.
 */

export interface ParsedNode {
  xpath: string;
  tag: string;
  /** direct text content, whitespace-collapsed */
  text: string;
}

const VOID_ELEMENTS = new Set(
  "area base br col embed hr img input link meta param source track wbr".split(" "),
);

const RAW_TEXT_ELEMENTS = new Set(["script", "style"]);

const NAMED_ENTITIES: Record<string, string> = {
  amp: "&",
  lt: "<",
  gt: ">",
  quot: '"',
  apos: "'",
  nbsp: " ",
};

export function decodeEntities(s: string): string {
  return s.replace(/&(#x?[0-9a-fA-F]+|[a-zA-Z]+);/g, (whole, body: string) => {
    if (body.startsWith("#x") || body.startsWith("#X")) {
      return String.fromCodePoint(parseInt(body.slice(2), 16));
    }
    if (body.startsWith("#")) {
      return String.fromCodePoint(parseInt(body.slice(1), 10));
    }
    return NAMED_ENTITIES[body.toLowerCase()] ?? whole;
  });
}

function collapse(s: string): string {
  return s.replace(/\s+/g, " ").trim();
}

interface OpenElement {
  tag: string;
  xpath: string;
  order: number;
  textParts: string[];
  childCounts: Map<string, number>;
}

const TAG_RE = /<!--[\s\S]*?-->|<!?\/?[a-zA-Z][^>]*>/g;

export class MarkupError extends Error {}

/** Parse a full document; returns elements in document (pre-order) order. */
export function parseDocument(html: string): ParsedNode[] {
  const out: (ParsedNode & { order: number })[] = [];
  const stack: OpenElement[] = [];
  const rootCounts = new Map<string, number>();
  let last = 0;
  let nextOrder = 0;

  const addText = (raw: string) => {
    if (stack.length === 0) return;
    const top = stack[stack.length - 1];
    if (RAW_TEXT_ELEMENTS.has(top.tag)) return;
    const text = decodeEntities(raw);
    if (text.trim()) top.textParts.push(text);
  };

  const open = (tag: string) => {
    const counts =
      stack.length === 0 ? rootCounts : stack[stack.length - 1].childCounts;
    const index = (counts.get(tag) ?? 0) + 1;
    counts.set(tag, index);
    const parentPath = stack.length === 0 ? "" : stack[stack.length - 1].xpath;
    stack.push({
      tag,
      xpath: `${parentPath}/${tag}[${index}]`,
      order: nextOrder++,
      textParts: [],
      childCounts: new Map(),
    });
  };

  const close = (tag: string) => {
    const top = stack.pop();
    if (!top || top.tag !== tag) {
      throw new MarkupError(
        `unbalanced </${tag}> (open element: ${top?.tag ?? "none"})`,
      );
    }
    out.push({
      xpath: top.xpath,
      tag: top.tag,
      text: collapse(top.textParts.join(" ")),
      order: top.order,
    });
  };

  for (const match of html.matchAll(TAG_RE)) {
    addText(html.slice(last, match.index));
    last = match.index + match[0].length;
    const token = match[0];
    if (token.startsWith("<!--") || token.startsWith("<!")) continue;
    const m = /^<(\/?)([a-zA-Z][a-zA-Z0-9-]*)/.exec(token);
    if (!m) continue;
    const [, slash, rawTag] = m;
    const tag = rawTag.toLowerCase();
    if (slash) {
      if (VOID_ELEMENTS.has(tag)) continue;
      close(tag);
    } else {
      open(tag);
      if (VOID_ELEMENTS.has(tag) || token.endsWith("/>")) close(tag);
    }
  }
  addText(html.slice(last));
  if (stack.length > 0) {
    throw new MarkupError(`unclosed <${stack[stack.length - 1].tag}>`);
  }
  // close() emits in post-order; the open-time counter restores pre-order
  return out
    .sort((a, b) => a.order - b.order)
    .map(({ xpath, tag, text }) => ({ xpath, tag, text }));
}

/** Elements with non-empty direct text, in document order. */
export function textNodes(html: string): ParsedNode[] {
  return parseDocument(html).filter((n) => n.text.length > 0);
}
