"""Annotated corpus handling: loading, HTML cleaning, deduplication,
domain-disjoint splitting, and dataset statistics."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .dom import DomTree, RawNode, XPath, freeze, normalize_text, parse_html

ANNOTATION_LABELS = (
    "title",
    "tag",
    "date",
    "short_text",
    "short_title",
    "author",
    "time",
)

_STRIP_TAGS = frozenset(["script", "style", "noscript"])


class AnnotationError(ValueError):
    """Annotation file is malformed or inconsistent with its HTML."""


class InfeasibleSplit(ValueError):
    """A single domain is too large for any split at the requested ratio."""


@dataclass(frozen=True)
class AttributeAnnotation:
    label: str
    xpath: XPath
    text: str

    def __post_init__(self):
        if self.label not in ANNOTATION_LABELS:
            raise AnnotationError(f"unknown attribute label {self.label!r}")
        if not self.text:
            raise AnnotationError("empty annotation text")


@dataclass(frozen=True)
class RecordAnnotation:
    boundary: XPath
    attributes: tuple[AttributeAnnotation, ...]


@dataclass
class AnnotatedPage:
    page_id: str
    domain: str
    html: DomTree
    records: tuple[RecordAnnotation, ...]
    url: str = ""

    def validate(self) -> None:
        if len(self.records) < 2:
            raise AnnotationError(
                f"{self.page_id}: multi-record page needs >= 2 records"
            )
        for rec in self.records:
            if self.html.resolve(rec.boundary) is None:
                raise AnnotationError(
                    f"{self.page_id}: boundary {rec.boundary} does not resolve"
                )
            for attr in rec.attributes:
                if self.html.resolve(attr.xpath) is None:
                    raise AnnotationError(
                        f"{self.page_id}: attribute xpath {attr.xpath} does not resolve"
                    )


@dataclass
class CorpusStats:
    pages: dict[str, int] = field(default_factory=dict)
    records: dict[str, int] = field(default_factory=dict)
    sites: dict[str, int] = field(default_factory=dict)


def load_page(annotation_path: Path, clean: bool = False) -> AnnotatedPage:
    """Load one page from its annotation JSON (html_file is relative to it)."""
    annotation_path = Path(annotation_path)
    try:
        meta = json.loads(annotation_path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise AnnotationError(f"{annotation_path}: {exc}") from exc
    html_path = annotation_path.parent / meta["html_file"]
    tree = parse_html(html_path.read_bytes())
    if clean:
        tree = clean_html(tree)
    records = tuple(
        RecordAnnotation(
            boundary=XPath.parse(rec["boundary_xpath"]),
            attributes=tuple(
                AttributeAnnotation(
                    label=a["label"],
                    xpath=XPath.parse(a["xpath"]),
                    text=normalize_text(a["text"]),
                )
                for a in rec["attributes"]
            ),
        )
        for rec in meta["records"]
    )
    return AnnotatedPage(
        page_id=meta["page_id"],
        domain=meta["domain"],
        html=tree,
        records=records,
        url=meta.get("url", ""),
    )


def load_corpus(corpus_dir: Path, clean: bool = False) -> list[AnnotatedPage]:
    pages = [
        load_page(p, clean=clean) for p in sorted(Path(corpus_dir).glob("*.json"))
    ]
    return pages


def clean_html(tree: DomTree) -> DomTree:
    """Drop script/style/noscript subtrees and inline on* handlers; node ids
    and xpaths are recomputed. Idempotent."""

    def prune(raw: RawNode) -> None:
        raw.attrs = {
            k: v for k, v in raw.attrs.items() if not k.startswith("on")
        }
        raw.children = [c for c in raw.children if c.tag not in _STRIP_TAGS]
        for child in raw.children:
            prune(child)

    raw = tree.to_raw()
    prune(raw)
    return freeze(raw)


def record_key(rec: RecordAnnotation) -> str:
    """Dedup key: label-sorted concatenation of attribute texts."""
    parts = sorted(f"{a.label}={a.text}" for a in rec.attributes)
    return "|".join(parts)


def is_duplicate(page: AnnotatedPage, seen_record_keys: set[str]) -> bool:
    """True when strictly more than a quarter of the page's records were seen."""
    keys = [record_key(r) for r in page.records]
    if not keys:
        return False
    hits = sum(1 for k in keys if k in seen_record_keys)
    return hits / len(keys) > 0.25


def dedupe(pages: list[AnnotatedPage]) -> tuple[list[AnnotatedPage], list[str]]:
    """Sequential first-occurrence-wins filter; returns (kept, dropped ids)."""
    seen: set[str] = set()
    kept, dropped = [], []
    for page in pages:
        if is_duplicate(page, seen):
            dropped.append(page.page_id)
        else:
            kept.append(page)
            seen.update(record_key(r) for r in page.records)
    return kept, dropped


def _attr_pages_by_domain(pages: list[AnnotatedPage]) -> dict[str, dict[str, int]]:
    out: dict[str, dict[str, int]] = {}
    for page in pages:
        counts = out.setdefault(page.domain, {label: 0 for label in ANNOTATION_LABELS})
        present = {a.label for r in page.records for a in r.attributes}
        for label in present:
            counts[label] += 1
    return out


def split_by_domain(
    pages: list[AnnotatedPage], ratio: float = 0.75, seed: int = 0
) -> tuple[list[AnnotatedPage], list[AnnotatedPage]]:
    """Domain-disjoint train/test split near the requested page ratio.

    Domains are assigned greedily in decreasing page count; among feasible
    bins the one minimizing L1 divergence of per-attribute page fractions
    (bin vs corpus) wins, seeded rng breaking exact ties.
    """
    if not 0 < ratio < 1:
        raise ValueError(f"ratio must be in (0, 1), got {ratio}")
    total = len(pages)
    if total == 0:
        return [], []
    by_domain: dict[str, list[AnnotatedPage]] = {}
    for page in pages:
        by_domain.setdefault(page.domain, []).append(page)
    largest = max(len(v) for v in by_domain.values())
    if len(by_domain) < 2 or largest / total > max(ratio, 1 - ratio):
        raise InfeasibleSplit(
            "a single domain holds too many pages for this ratio"
        )

    attr_counts = _attr_pages_by_domain(pages)
    global_frac = {
        label: sum(c[label] for c in attr_counts.values()) / total
        for label in ANNOTATION_LABELS
    }
    rng = random.Random(seed)
    order = sorted(by_domain, key=lambda d: (-len(by_domain[d]), d))
    bins = {"train": [], "test": []}
    bin_attr = {
        "train": {label: 0 for label in ANNOTATION_LABELS},
        "test": {label: 0 for label in ANNOTATION_LABELS},
    }
    targets = {"train": ratio, "test": 1 - ratio}
    for domain in order:
        n = len(by_domain[domain])
        costs = {}
        for name in ("train", "test"):
            size = len(bins[name]) + n
            cap = (targets[name] + 0.05) * total
            over = max(0.0, size - cap)
            frac = size / (total * targets[name])
            div = sum(
                abs(
                    (bin_attr[name][label] + attr_counts[domain][label]) / size
                    - global_frac[label]
                )
                for label in ANNOTATION_LABELS
            )
            costs[name] = (over, div + 0.01 * abs(frac - 1.0))
        best = min(costs.values())
        choices = [name for name in ("train", "test") if costs[name] == best]
        pick = choices[0] if len(choices) == 1 else rng.choice(choices)
        bins[pick].extend(by_domain[domain])
        for label in ANNOTATION_LABELS:
            bin_attr[pick][label] += attr_counts[domain][label]
    return bins["train"], bins["test"]


def compute_stats(pages: list[AnnotatedPage]) -> CorpusStats:
    """Per attribute label: pages, records, and distinct domains containing it."""
    stats = CorpusStats(
        pages={label: 0 for label in ANNOTATION_LABELS},
        records={label: 0 for label in ANNOTATION_LABELS},
        sites={label: 0 for label in ANNOTATION_LABELS},
    )
    domains: dict[str, set[str]] = {label: set() for label in ANNOTATION_LABELS}
    for page in pages:
        page_labels = set()
        for rec in page.records:
            rec_labels = {a.label for a in rec.attributes}
            page_labels.update(rec_labels)
            for label in rec_labels:
                stats.records[label] += 1
        for label in page_labels:
            stats.pages[label] += 1
            domains[label].add(page.domain)
    for label in ANNOTATION_LABELS:
        stats.sites[label] = len(domains[label])
    return stats


def stats_table(stats: CorpusStats) -> str:
    """Markdown table with Name / Pages / Records / Sites columns."""
    lines = ["| Name | Pages | Records | Sites |", "| --- | --- | --- | --- |"]
    for label in ANNOTATION_LABELS:
        lines.append(
            f"| {label} | {stats.pages[label]} | {stats.records[label]} "
            f"| {stats.sites[label]} |"
        )
    return "\n".join(lines)
