"""Evaluation mathematics: page-weighted segmentation/classification P/R/F1,
clustering agreement (ARI/NMI) over node-to-record assignments, and the
three-case record-level accounting for the end-to-end method."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import log

import numpy as np

from .classifier import ATTRIBUTE_LABELS, LabeledNode
from .corpus import AnnotatedPage
from .dom import DomTree, XPath, normalize_text
from .matcher import RecordExtraction, build_prefix_index
from .segmenter import Segmentation


class EmptyCorpus(ValueError):
    """Averaging requires at least one page."""


class MismatchedItems(ValueError):
    """Clusterings cover different item sets."""


class PageSetMismatch(ValueError):
    """Reference and predicted page sets differ."""


@dataclass(frozen=True)
class PageConfusion:
    tp: int
    fp: int
    fn: int


@dataclass(frozen=True)
class NodeClustering:
    """Text-node id -> cluster id; 0 is background, i>=1 is record i."""

    assignment: dict[int, int]


@dataclass
class AttributeCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return page_prf(PageConfusion(self.tp, self.fp, self.fn))[0]

    @property
    def recall(self) -> float:
        return page_prf(PageConfusion(self.tp, self.fp, self.fn))[1]

    @property
    def f1(self) -> float:
        return page_prf(PageConfusion(self.tp, self.fp, self.fn))[2]


def seg_page_confusion(
    reference: Segmentation, predicted: Segmentation
) -> PageConfusion:
    ref = set(reference.boundaries)
    pred = set(predicted.boundaries)
    return PageConfusion(
        tp=len(ref & pred), fp=len(pred - ref), fn=len(ref - pred)
    )


def page_prf(c: PageConfusion) -> tuple[float, float, float]:
    """Precision/recall/F1; 0/0 is 1.0 only on perfect empty agreement."""
    if c.tp == 0 and c.fp == 0 and c.fn == 0:
        return 1.0, 1.0, 1.0
    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
    recall = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
    f1 = (
        2 * precision * recall / (precision + recall)
        if precision + recall
        else 0.0
    )
    return precision, recall, f1


def corpus_avg(
    pages: list[tuple[float, float, float]]
) -> tuple[float, float, float]:
    """Unweighted per-page means (f1_avg is the mean of page F1s)."""
    if not pages:
        raise EmptyCorpus("no pages to average")
    k = len(pages)
    return (
        sum(p for p, _, _ in pages) / k,
        sum(r for _, r, _ in pages) / k,
        sum(f for _, _, f in pages) / k,
    )


def node_clustering(tree: DomTree, seg: Segmentation) -> NodeClustering:
    """Map each text node to its record's cluster via the prefix index."""
    ids = tree.text_nodes()
    if not seg.boundaries:
        return NodeClustering({nid: 0 for nid in ids})
    index = build_prefix_index(seg)
    assignment: dict[int, int] = {}
    for nid in ids:
        xp = tree.xpath_of(nid)
        cluster = 0
        best_len = -1
        for i, prefix in enumerate(index.prefixes):
            if prefix.is_prefix_of(xp) and len(prefix) > best_len:
                cluster, best_len = i + 1, len(prefix)
        assignment[nid] = cluster
    return NodeClustering(assignment)


def _contingency(a: NodeClustering, b: NodeClustering) -> np.ndarray:
    if a.assignment.keys() != b.assignment.keys():
        raise MismatchedItems("clusterings cover different items")
    ids = sorted(a.assignment)
    ca = {c: i for i, c in enumerate(sorted({a.assignment[x] for x in ids}))}
    cb = {c: i for i, c in enumerate(sorted({b.assignment[x] for x in ids}))}
    table = np.zeros((len(ca), len(cb)), dtype=np.int64)
    for x in ids:
        table[ca[a.assignment[x]], cb[b.assignment[x]]] += 1
    return table


def ari(a: NodeClustering, b: NodeClustering) -> float:
    """Adjusted Rand Index from the contingency table."""
    table = _contingency(a, b)
    n = table.sum()
    if n == 0:
        return 1.0
    comb = lambda x: x * (x - 1) / 2.0
    sum_cells = comb(table.astype(np.float64)).sum()
    sum_rows = comb(table.sum(axis=1).astype(np.float64)).sum()
    sum_cols = comb(table.sum(axis=0).astype(np.float64)).sum()
    total = comb(float(n))
    expected = sum_rows * sum_cols / total if total else 0.0
    max_index = (sum_rows + sum_cols) / 2.0
    if max_index == expected:
        return 1.0
    return float((sum_cells - expected) / (max_index - expected))


def nmi(a: NodeClustering, b: NodeClustering) -> float:
    """NMI with arithmetic-mean entropy normalization; two single-cluster
    assignments score 1.0."""
    table = _contingency(a, b)
    n = table.sum()
    if n == 0:
        return 1.0
    pa = table.sum(axis=1) / n
    pb = table.sum(axis=0) / n
    ha = -sum(p * log(p) for p in pa if p > 0)
    hb = -sum(p * log(p) for p in pb if p > 0)
    if ha == 0.0 and hb == 0.0:
        return 1.0
    if ha == 0.0 or hb == 0.0:
        return 0.0
    mi = 0.0
    for i in range(table.shape[0]):
        for j in range(table.shape[1]):
            pij = table[i, j] / n
            if pij > 0:
                mi += pij * log(pij / (pa[i] * pb[j]))
    return float(mi / ((ha + hb) / 2.0))


def classification_metrics(
    reference: dict[str, list[LabeledNode]],
    predicted: dict[str, list[LabeledNode]],
    labels: tuple[str, ...] = ATTRIBUTE_LABELS,
) -> dict[str, tuple[float, float, float]]:
    """Page-weighted per-label P/R/F1 over (xpath, label) pairs, keyed by
    page_id in both inputs."""
    if reference.keys() != predicted.keys():
        raise PageSetMismatch("reference and predicted page ids differ")
    per_label_pages: dict[str, list[tuple[float, float, float]]] = {
        label: [] for label in labels
    }
    for page_id in reference:
        ref_nodes, pred_nodes = reference[page_id], predicted[page_id]
        for label in labels:
            ref = {n.xpath for n in ref_nodes if n.label == label}
            pred = {n.xpath for n in pred_nodes if n.label == label}
            c = PageConfusion(
                tp=len(ref & pred), fp=len(pred - ref), fn=len(ref - pred)
            )
            per_label_pages[label].append(page_prf(c))
    return {label: corpus_avg(pages) for label, pages in per_label_pages.items()}


def _record_multiset(
    attrs, labels: tuple[str, ...]
) -> dict[str, Counter]:
    out: dict[str, Counter] = {label: Counter() for label in labels}
    for a in attrs:
        if a.label in out:
            out[a.label][normalize_text(a.text)] += 1
    return out


def final_record_metrics(
    reference_pages: list[AnnotatedPage],
    predicted: dict[str, tuple[list[RecordExtraction], list[LabeledNode]]],
    labels: tuple[str, ...] = ATTRIBUTE_LABELS,
) -> dict[str, AttributeCounts]:
    """Three-case record-level accounting, micro-aggregated over the corpus.

    `predicted` maps page_id to (record extractions, unmatched attributes).
    A predicted record matches the earliest unmatched reference record whose
    boundary lies under the predicted record's region prefix. Matched pairs
    compare per-label multisets of normalized texts; unmatched reference
    records add FN for all their attributes; unmatched predicted records and
    the unmatched-attribute pool add FP.
    """
    if {p.page_id for p in reference_pages} != set(predicted):
        raise PageSetMismatch("reference and predicted page ids differ")
    counts = {label: AttributeCounts() for label in labels}
    for page in reference_pages:
        records, unmatched_attrs = predicted[page.page_id]
        ref_sets = [_record_multiset(r.attributes, labels) for r in page.records]
        ref_taken = [False] * len(page.records)
        pred_sets = []
        pairs: list[tuple[int, int | None]] = []  # (pred idx, ref idx or None)
        for pi, pred_rec in enumerate(records):
            pred_sets.append(_record_multiset(pred_rec.attributes, labels))
            match = None
            if pred_rec.prefix is not None:
                for ri, rec in enumerate(page.records):
                    if not ref_taken[ri] and pred_rec.prefix.is_prefix_of(
                        rec.boundary
                    ):
                        match = ri
                        ref_taken[ri] = True
                        break
            pairs.append((pi, match))
        for pi, ri in pairs:
            if ri is None:
                # case 3: spurious predicted record
                for label in labels:
                    counts[label].fp += sum(pred_sets[pi][label].values())
            else:
                # case 1: matched pair, multiset comparison per label
                for label in labels:
                    ref_c, pred_c = ref_sets[ri][label], pred_sets[pi][label]
                    inter = sum((ref_c & pred_c).values())
                    counts[label].tp += inter
                    counts[label].fp += sum(pred_c.values()) - inter
                    counts[label].fn += sum(ref_c.values()) - inter
        for ri, taken in enumerate(ref_taken):
            if not taken:
                # case 2: missed reference record
                for label in labels:
                    counts[label].fn += sum(ref_sets[ri][label].values())
        for attr in unmatched_attrs:
            if attr.label in counts:
                counts[attr.label].fp += 1
    return counts
