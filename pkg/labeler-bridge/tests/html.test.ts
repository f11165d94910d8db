import * as fs from "node:fs";
import * as path from "node:path";
import { describe, expect, it } from "vitest";
import { decodeEntities, parseDocument, textNodes, MarkupError } from "../src/html.js";
import { AnnotationStore } from "../src/annotations.js";

const CORPUS = path.join(__dirname, "fixtures", "corpus");

describe("parseDocument", () => {
  it("assigns positional xpaths with same-tag sibling indices", () => {
    const nodes = parseDocument(
      "<html><body><ul><li>a</li><li>b</li></ul><p>c</p></body></html>",
    );
    const byXpath = new Map(nodes.map((n) => [n.xpath, n.text]));
    expect(byXpath.get("/html[1]/body[1]/ul[1]/li[1]")).toBe("a");
    expect(byXpath.get("/html[1]/body[1]/ul[1]/li[2]")).toBe("b");
    expect(byXpath.get("/html[1]/body[1]/p[1]")).toBe("c");
  });

  it("returns elements in document pre-order", () => {
    const nodes = parseDocument(
      "<html><head><title>t</title></head><body><div><a>x</a></div></body></html>",
    );
    expect(nodes.map((n) => n.tag)).toEqual([
      "html",
      "head",
      "title",
      "body",
      "div",
      "a",
    ]);
  });

  it("collapses whitespace in direct text", () => {
    const [p] = textNodes("<p>  a \n  b  </p>");
    expect(p.text).toBe("a b");
  });

  it("keeps direct text separate from child text", () => {
    const nodes = parseDocument("<div>outer<span>inner</span></div>");
    expect(nodes.find((n) => n.tag === "div")!.text).toBe("outer");
    expect(nodes.find((n) => n.tag === "span")!.text).toBe("inner");
  });

  it("ignores script content and comments", () => {
    const nodes = textNodes(
      "<body><script>var x = 1;</script><!-- note --><p>t</p></body>",
    );
    expect(nodes).toHaveLength(1);
    expect(nodes[0].tag).toBe("p");
  });

  it("handles void elements without closing tags", () => {
    const nodes = parseDocument("<body><br><img src='x'><p>t</p></body>");
    expect(nodes.map((n) => n.tag)).toEqual(["body", "br", "img", "p"]);
  });

  it("rejects unbalanced markup", () => {
    expect(() => parseDocument("<div><p>t</div>")).toThrow(MarkupError);
  });
});

describe("decodeEntities", () => {
  it("decodes named and numeric references", () => {
    expect(decodeEntities("a &amp; b &lt;c&gt; &#x27;d&#39;")).toBe(
      "a & b <c> 'd'",
    );
  });
});

describe("fixture corpus round trip", () => {
  it("every annotated xpath is a text node with the annotated text", () => {
    const store = new AnnotationStore(CORPUS);
    for (const pageId of store.pageIds()) {
      const page = store.get(pageId)!;
      const html = fs.readFileSync(path.join(CORPUS, page.htmlFile), "utf-8");
      const present = new Set(textNodes(html).map((n) => n.xpath));
      for (const xpath of page.boundaries) {
        expect(present.has(xpath), `${pageId} boundary ${xpath}`).toBe(true);
      }
      for (const xpath of page.attrLabels.keys()) {
        expect(present.has(xpath), `${pageId} attr ${xpath}`).toBe(true);
      }
    }
  });
});
