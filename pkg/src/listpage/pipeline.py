"""End-to-end orchestration of the parallel and sequential architectures.

Parallel: segmentation and whole-page classification run independently and
are merged by prefix matching. Sequential: segmentation first, then
classification restricted to each record's prefix region, so no matching
step is needed.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .classifier import (
    LabeledNode,
    classify_external,
    classify_heuristic,
    make_request,
)
from .corpus import AnnotatedPage
from .dom import DomTree, XPath
from .labeler_client import query_labels
from .matcher import RecordExtraction, build_prefix_index, match_attributes
from .segmenter import (
    DEFAULT_TAU,
    Segmentation,
    segment_mdr,
    segmentation_from_labels,
)

log = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    mode: str = "sequential"  # "parallel" | "sequential"
    segmenter: object = "mdr"  # "mdr" | "external" | callable(tree) -> Segmentation
    classifier: object = "heuristic"
    # "heuristic" | "external" | callable(tree, scope) -> list[LabeledNode]
    tau: float = DEFAULT_TAU
    labeler: object = None  # handle with .request(payload), for external parts
    workers: int = 1

    def __post_init__(self):
        if self.mode not in ("parallel", "sequential"):
            raise ValueError(f"unknown pipeline mode {self.mode!r}")
        for part in (self.segmenter, self.classifier):
            if part == "external" and self.labeler is None:
                raise ValueError("external components require a labeler endpoint")


@dataclass
class PageResult:
    page_id: str
    records: list[RecordExtraction]
    unmatched: list[LabeledNode]
    segmentation: Segmentation


def _segment(tree: DomTree, page_id: str, cfg: PipelineConfig) -> Segmentation:
    if callable(cfg.segmenter):
        return cfg.segmenter(tree)
    if cfg.segmenter == "mdr":
        return segment_mdr(tree, cfg.tau)
    ids = [
        (tree.xpath_of(nid), tree.node(nid).tag, tree.node(nid).own_text)
        for nid in tree.text_nodes()
    ]
    pairs = query_labels(
        cfg.labeler,
        task="segment",
        context="page",
        page_id=page_id,
        nodes=ids,
        allowed_labels={"BEGIN", "OUT"},
    )
    return segmentation_from_labels(tree, pairs)


def _classify(
    tree: DomTree, page_id: str, cfg: PipelineConfig, scope: XPath | None
) -> list[LabeledNode]:
    if callable(cfg.classifier):
        return cfg.classifier(tree, scope)
    if cfg.classifier == "heuristic":
        return classify_heuristic(tree, scope)
    context = "page" if scope is None else "record"
    request = make_request(tree, context, page_id, fragment_root=scope)
    return classify_external(cfg.labeler, request)


def run_parallel(
    tree: DomTree, cfg: PipelineConfig, page_id: str = ""
) -> PageResult:
    """Independent segmentation + whole-page classification, then matching."""
    seg = _segment(tree, page_id, cfg)
    attrs = _classify(tree, page_id, cfg, scope=None)
    index = build_prefix_index(seg)
    records, unmatched = match_attributes(index, attrs)
    return PageResult(page_id, records, unmatched, seg)


def run_sequential(
    tree: DomTree, cfg: PipelineConfig, page_id: str = ""
) -> PageResult:
    """Segmentation, then per-record classification inside each prefix region."""
    seg = _segment(tree, page_id, cfg)
    index = build_prefix_index(seg)
    records = []
    for i, prefix in enumerate(index.prefixes):
        attrs = _classify(tree, page_id, cfg, scope=prefix)
        records.append(
            RecordExtraction(record_index=i, attributes=attrs, prefix=prefix)
        )
    return PageResult(page_id, records, [], seg)


def run_page(tree: DomTree, cfg: PipelineConfig, page_id: str = "") -> PageResult:
    if cfg.mode == "parallel":
        return run_parallel(tree, cfg, page_id)
    return run_sequential(tree, cfg, page_id)


@dataclass
class CorpusRun:
    results: dict[str, PageResult] = field(default_factory=dict)
    failed: dict[str, str] = field(default_factory=dict)  # page_id -> reason


def run_corpus(pages: list[AnnotatedPage], cfg: PipelineConfig) -> CorpusRun:
    """Process pages with failure isolation; a failed page never aborts the run."""
    run = CorpusRun()

    def work(page: AnnotatedPage):
        try:
            return page.page_id, run_page(page.html, cfg, page.page_id), None
        except Exception as exc:  # per-page isolation is the contract
            log.warning("page %s failed: %s", page.page_id, exc)
            return page.page_id, None, f"{type(exc).__name__}: {exc}"

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(work, pages))
    else:
        outcomes = [work(p) for p in pages]
    for page_id, result, err in outcomes:
        if err is None:
            run.results[page_id] = result
        else:
            run.failed[page_id] = err
    return run


def run_manifest(run: CorpusRun, cfg: PipelineConfig) -> dict:
    return {
        "pages": len(run.results) + len(run.failed),
        "failed": sorted(run.failed),
        "config": {
            "mode": cfg.mode,
            "segmenter": cfg.segmenter if isinstance(cfg.segmenter, str) else "injected",
            "classifier": cfg.classifier
            if isinstance(cfg.classifier, str)
            else "injected",
            "tau": cfg.tau,
            "workers": cfg.workers,
        },
    }
