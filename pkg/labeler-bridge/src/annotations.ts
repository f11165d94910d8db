/**
 * Annotation store for oracle mode: per-page boundary xpaths and
 * attribute labels, loaded from the corpus annotation JSON files.
 */

import * as fs from "node:fs";
import * as path from "node:path";

export interface PageAnnotation {
  pageId: string;
  htmlFile: string;
  /** xpaths of record boundary nodes */
  boundaries: Set<string>;
  /** attribute xpath -> label (title/tag/date) */
  attrLabels: Map<string, string>;
}

interface RawAttribute {
  label: string;
  text: string;
  xpath: string;
}

interface RawRecord {
  boundary_xpath: string;
  attributes: RawAttribute[];
}

interface RawPage {
  page_id: string;
  html_file: string;
  records: RawRecord[];
}

export class AnnotationStore {
  private pages = new Map<string, PageAnnotation>();

  constructor(public readonly dir: string) {
    const files = fs
      .readdirSync(dir)
      .filter((f) => f.endsWith(".json"))
      .sort();
    if (files.length === 0) {
      throw new Error(`no annotation files in ${dir}`);
    }
    for (const file of files) {
      const raw = JSON.parse(
        fs.readFileSync(path.join(dir, file), "utf-8"),
      ) as RawPage;
      const boundaries = new Set<string>();
      const attrLabels = new Map<string, string>();
      for (const record of raw.records) {
        boundaries.add(record.boundary_xpath);
        for (const attr of record.attributes) {
          attrLabels.set(attr.xpath, attr.label);
        }
      }
      this.pages.set(raw.page_id, {
        pageId: raw.page_id,
        htmlFile: raw.html_file,
        boundaries,
        attrLabels,
      });
    }
  }

  get(pageId: string): PageAnnotation | undefined {
    return this.pages.get(pageId);
  }

  pageIds(): string[] {
    return [...this.pages.keys()];
  }
}
