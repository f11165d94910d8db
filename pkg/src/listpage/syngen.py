"""Deterministic synthetic list-page generator with exact ground truth.

Pages imitate news list layouts: repeated record templates (flat ul/li,
card grid, header+body sibling pairs) with optional nav/footer/ads noise,
per-attribute dropout, and multi-valued tags. The emitted annotation is
exact, so generated corpora serve as oracles for segmentation,
classification, matching, and the metrics."""

from __future__ import annotations

import datetime
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import AnnotatedPage, AttributeAnnotation, RecordAnnotation
from .dom import XPath, parse_html

TEMPLATES = ("flat_list", "card_grid", "header_pairs")
NOISE_KINDS = ("nav", "footer", "ads")

_WORDS = (
    "market quiet signal harbor update launch report growth council border "
    "energy summit voters climate railway housing digital museum victory "
    "storm banking reform transit galaxy harvest fabric timber meadow"
).split()

_TAG_WORDS = (
    "politics economy sports culture science tech world local opinion travel"
).split()

_DATE_START = datetime.date(2023, 12, 28).toordinal()
_DATE_END = datetime.date(2024, 4, 28).toordinal()


@dataclass
class PageSpec:
    seed: int
    n_records: int = 5
    template: str = "flat_list"
    optional_attr_dropout: float = 0.0
    multi_tag_range: tuple[int, int] = (1, 2)
    noise: tuple[str, ...] = ()
    class_name_churn: bool = False
    page_id: str = "page0000"
    domain: str = "site0.example"

    def __post_init__(self):
        if self.n_records < 2:
            raise ValueError("a multi-record page needs n_records >= 2")
        if self.template not in TEMPLATES:
            raise ValueError(f"unknown template {self.template!r}")
        if not 0 <= self.optional_attr_dropout <= 1:
            raise ValueError("dropout must be a probability")
        for kind in self.noise:
            if kind not in NOISE_KINDS:
                raise ValueError(f"unknown noise kind {kind!r}")


@dataclass
class RecordContent:
    """Attribute values of one record, independent of layout."""

    title: str
    date: str | None
    tags: tuple[str, ...]


class El:
    """Build-side element; serializes to HTML and knows its own xpath."""

    __slots__ = ("tag", "attrs", "children", "text", "role")

    def __init__(self, tag, attrs=None, children=None, text="", role=None):
        self.tag = tag
        self.attrs = attrs or {}
        self.children = children or []
        self.text = text
        self.role = role  # None | ("attr", label) | "record_root"

    def serialize(self, out: list[str]) -> None:
        attrs = "".join(f' {k}="{v}"' for k, v in self.attrs.items())
        out.append(f"<{self.tag}{attrs}>")
        if self.text:
            out.append(self.text)
        for child in self.children:
            child.serialize(out)
        out.append(f"</{self.tag}>")


def _walk_xpaths(root: El):
    """Yield (element, XPath) in pre-order with positional indices."""

    def walk(el: El, steps):
        yield el, XPath(steps)
        counts: dict[str, int] = {}
        for child in el.children:
            counts[child.tag] = counts.get(child.tag, 0) + 1
            yield from walk(child, steps + ((child.tag, counts[child.tag]),))

    yield from walk(root, ((root.tag, 1),))


def _first_text_xpath(record_roots: list[El], xpath_of) -> XPath:
    for root in record_roots:
        for el, _ in _walk_xpaths(root):
            if el.text.strip():
                return xpath_of[id(el)]
    raise AssertionError("record template produced no text node")


def _sentence(rng: random.Random, n_words: tuple[int, int]) -> str:
    k = rng.randint(*n_words)
    words = [rng.choice(_WORDS) for _ in range(k)]
    return " ".join(words).capitalize()


def _date_text(rng: random.Random) -> str:
    d = datetime.date.fromordinal(rng.randint(_DATE_START, _DATE_END))
    style = rng.randrange(4)
    if style == 0:
        return d.strftime("%d.%m.%Y")
    if style == 1:
        return d.strftime("%Y-%m-%d")
    if style == 2:
        return f"{d.strftime('%B')} {d.day}, {d.year}"
    return f"{rng.randint(2, 55)} minutes ago"


def _record_content(rng: random.Random, spec: PageSpec) -> RecordContent:
    title = _sentence(rng, (4, 8))
    date = None if rng.random() < spec.optional_attr_dropout else _date_text(rng)
    lo, hi = spec.multi_tag_range
    n_tags = rng.randint(lo, hi)
    if rng.random() < spec.optional_attr_dropout:
        n_tags = 0
    tags = tuple(rng.sample(_TAG_WORDS, min(n_tags, len(_TAG_WORDS))))
    return RecordContent(title=title, date=date, tags=tags)


def _cls(rng: random.Random, base: str, churn: bool) -> str:
    return f"{base}-{rng.randrange(10**6)}" if churn else base


def _build_record(
    content: RecordContent, spec: PageSpec, rng: random.Random
) -> list[El]:
    """Layout one record; returns its sibling root elements."""
    churn = spec.class_name_churn
    title_el = El("a", {"href": "#"}, text=content.title, role=("attr", "title"))
    date_el = (
        El("span", {"class": _cls(rng, "date", churn)}, text=content.date,
           role=("attr", "date"))
        if content.date
        else None
    )
    tag_els = [
        El("a", {"href": "#", "class": _cls(rng, "tag", churn)}, text=t,
           role=("attr", "tag"))
        for t in content.tags
    ]
    if spec.template == "flat_list":
        kids = [El("h3", children=[title_el])]
        if date_el:
            kids.append(date_el)
        if tag_els:
            kids.append(El("span", {"class": _cls(rng, "tags", churn)},
                           children=tag_els))
        return [El("li", {"class": _cls(rng, "item", churn)}, children=kids)]
    if spec.template == "card_grid":
        kids = [El("h2", children=[title_el])]
        meta_kids = []
        if date_el:
            meta_kids.append(date_el)
        if meta_kids:
            kids.append(El("div", {"class": _cls(rng, "meta", churn)},
                           children=meta_kids))
        if tag_els:
            kids.append(El("div", {"class": _cls(rng, "tags", churn)},
                           children=tag_els))
        return [El("div", {"class": _cls(rng, "card", churn)}, children=kids)]
    # header_pairs: two sibling roots per record
    header = El("h3", children=[title_el])
    body_kids = ([date_el] if date_el else []) + tag_els
    body = El("p", {"class": _cls(rng, "meta", churn)}, children=body_kids)
    return [header, body]


def _noise_nav(rng: random.Random) -> El:
    items = [
        El("li", children=[El("a", {"href": "#"}, text=rng.choice(_TAG_WORDS))])
        for _ in range(rng.randint(3, 6))
    ]
    return El("nav", children=[El("ul", children=items)])


def _noise_footer(rng: random.Random) -> El:
    paras = [
        El("p", text=_sentence(rng, (6, 12))) for _ in range(rng.randint(2, 3))
    ]
    return El("footer", children=paras)


def _noise_ads(rng: random.Random) -> El:
    return El(
        "div",
        {"class": "ads"},
        children=[El("a", {"href": "#"}, text=_sentence(rng, (2, 3)))],
    )


def generate_page(spec: PageSpec) -> tuple[bytes, AnnotatedPage]:
    """Build one page; deterministic for a fixed spec."""
    rng = random.Random(spec.seed)
    contents = [_record_content(rng, spec) for _ in range(spec.n_records)]
    return _materialize(spec, rng, contents)


def _materialize(
    spec: PageSpec, rng: random.Random, contents: list[RecordContent]
) -> tuple[bytes, AnnotatedPage]:
    record_roots = [_build_record(c, spec, rng) for c in contents]
    flat_roots = [el for roots in record_roots for el in roots]
    if spec.template == "flat_list":
        container = El("ul", {"class": "news"}, children=flat_roots)
    elif spec.template == "card_grid":
        container = El("div", {"class": "grid"}, children=flat_roots)
    else:
        container = El("div", {"class": "stream"}, children=flat_roots)

    body_kids: list[El] = []
    if "nav" in spec.noise:
        body_kids.append(_noise_nav(rng))
    body_kids.append(container)
    if "ads" in spec.noise:
        body_kids.append(_noise_ads(rng))
    if "footer" in spec.noise:
        body_kids.append(_noise_footer(rng))

    head = El("head", children=[El("title", text=f"{spec.domain} news")])
    body = El("body", children=body_kids)
    root = El("html", children=[head, body])

    out: list[str] = ["<!DOCTYPE html>"]
    root.serialize(out)
    html_bytes = "".join(out).encode("utf-8")

    xpath_of = {id(el): xp for el, xp in _walk_xpaths(root)}
    records = []
    for roots, content in zip(record_roots, contents):
        boundary = _first_text_xpath(roots, xpath_of)
        attrs = []
        for el_root in roots:
            for el, _ in _walk_xpaths(el_root):
                if el.role and el.role[0] == "attr":
                    attrs.append(
                        AttributeAnnotation(
                            label=el.role[1],
                            xpath=xpath_of[id(el)],
                            text=el.text,
                        )
                    )
        records.append(
            RecordAnnotation(boundary=boundary, attributes=tuple(attrs))
        )

    page = AnnotatedPage(
        page_id=spec.page_id,
        domain=spec.domain,
        html=parse_html(html_bytes),
        records=tuple(records),
        url=f"https://{spec.domain}/news",
    )
    page.validate()
    return html_bytes, page


def annotation_dict(page: AnnotatedPage, html_file: str) -> dict:
    return {
        "page_id": page.page_id,
        "url": page.url,
        "domain": page.domain,
        "html_file": html_file,
        "records": [
            {
                "boundary_xpath": str(r.boundary),
                "attributes": [
                    {"label": a.label, "xpath": str(a.xpath), "text": a.text}
                    for a in r.attributes
                ],
            }
            for r in page.records
        ],
    }


@dataclass
class CorpusSpec:
    n_pages: int
    seed: int = 0
    templates: tuple[str, ...] = TEMPLATES
    n_records_range: tuple[int, int] = (3, 8)
    optional_attr_dropout: float = 0.0
    multi_tag_range: tuple[int, int] = (1, 2)
    noise: tuple[str, ...] = ()
    class_name_churn: bool = False
    n_domains: int = 8
    duplicate_fraction: float = 0.0
    """Fraction of pages that re-use 30% of the previous page's records."""


def corpus_specs(cspec: CorpusSpec) -> list[PageSpec]:
    rng = random.Random(cspec.seed)
    specs = []
    for i in range(cspec.n_pages):
        specs.append(
            PageSpec(
                seed=rng.randrange(2**32),
                n_records=rng.randint(*cspec.n_records_range),
                template=cspec.templates[i % len(cspec.templates)],
                optional_attr_dropout=cspec.optional_attr_dropout,
                multi_tag_range=cspec.multi_tag_range,
                noise=cspec.noise,
                class_name_churn=cspec.class_name_churn,
                page_id=f"page{i:04d}",
                domain=f"site{i % cspec.n_domains}.example",
            )
        )
    return specs


def generate_corpus_pages(
    cspec: CorpusSpec,
) -> list[tuple[bytes, AnnotatedPage]]:
    """Generate all pages in memory, with optional duplicate injection."""
    rng = random.Random(cspec.seed + 1)
    out = []
    prev_contents: list[RecordContent] | None = None
    for spec in corpus_specs(cspec):
        page_rng = random.Random(spec.seed)
        contents = [_record_content(page_rng, spec) for _ in range(spec.n_records)]
        if (
            prev_contents
            and cspec.duplicate_fraction > 0
            and rng.random() < cspec.duplicate_fraction
        ):
            n_copy = max(1, round(0.3 * len(contents)) )
            n_copy = min(n_copy, len(prev_contents))
            # >25% of this page's records repeat the previous page's
            while n_copy / len(contents) <= 0.25:
                n_copy += 1
            contents[:n_copy] = prev_contents[:n_copy]
        out.append(_materialize(spec, page_rng, contents))
        prev_contents = contents
    return out


def generate_corpus(cspec: CorpusSpec, out_dir: Path) -> list[AnnotatedPage]:
    """Write HTML + annotation files in the corpus-on-disk format."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    pages = []
    for html_bytes, page in generate_corpus_pages(cspec):
        (out_dir / f"{page.page_id}.html").write_bytes(html_bytes)
        meta = annotation_dict(page, f"{page.page_id}.html")
        (out_dir / f"{page.page_id}.json").write_text(
            json.dumps(meta, indent=2, sort_keys=True), encoding="utf-8"
        )
        pages.append(page)
    return pages
