"""Record boundary detection: MDR-style repeated-fragment mining plus
ingestion of BEGIN/OUT labels from an external labeler."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ._kernels import levenshtein
from .dom import DomTree, XPath

log = logging.getLogger(__name__)

DEFAULT_TAU = 0.7
MAX_GROUP_SIZE = 3


class NoRecordsFound(Exception):
    """No repeated-structure candidate exists on the page."""


class UnresolvedXPath(Exception):
    """A supplied label xpath does not resolve to a node in the tree."""


@dataclass(frozen=True)
class Segmentation:
    """Document-ordered record-start xpaths ("information boundaries")."""

    boundaries: tuple[XPath, ...]

    def __len__(self) -> int:
        return len(self.boundaries)


@dataclass
class SegCandidate:
    """A run of >=2 structurally similar groups of consecutive children.

    Each group is a slice of `group_size` consecutive children of `parent`;
    `groups` holds (start, end) child-index spans.
    """

    parent: int
    group_size: int
    groups: list[tuple[int, int]]
    score: float = 0.0
    similarities: list[float] = field(default_factory=list, repr=False)


def tag_sequence(tree: DomTree, roots: list[int]) -> list[str]:
    """Pre-order element tags across the given sibling roots."""
    out: list[str] = []

    def walk(node_id: int) -> None:
        node = tree.node(node_id)
        out.append(node.tag)
        for child in node.children:
            walk(child)

    for root in roots:
        walk(root)
    return out


def fragment_similarity(seq_a: list[str], seq_b: list[str]) -> float:
    """1 - editdist/max(len); 1.0 when both sequences are empty."""
    if not seq_a and not seq_b:
        return 1.0
    vocab: dict[str, int] = {}
    enc_a = np.array([vocab.setdefault(t, len(vocab)) for t in seq_a], dtype=np.int64)
    enc_b = np.array([vocab.setdefault(t, len(vocab)) for t in seq_b], dtype=np.int64)
    dist = levenshtein(enc_a, enc_b)
    return 1.0 - dist / max(len(seq_a), len(seq_b))


def _group_sequences(tree: DomTree, children: tuple[int, ...], size: int):
    n_groups = len(children) // size
    spans = [(i * size, (i + 1) * size) for i in range(n_groups)]
    seqs = [tag_sequence(tree, list(children[a:b])) for a, b in spans]
    return spans, seqs


def generate_candidates(tree: DomTree, tau: float = DEFAULT_TAU) -> list[SegCandidate]:
    """All maximal runs of >=2 consecutive similar groups, for every parent
    with >=2 children and group sizes 1..MAX_GROUP_SIZE."""
    if not 0 < tau <= 1:
        raise ValueError(f"tau must be in (0, 1], got {tau}")
    candidates: list[SegCandidate] = []
    for node in tree.nodes():
        if len(node.children) < 2:
            continue
        for size in range(1, MAX_GROUP_SIZE + 1):
            if len(node.children) // size < 2:
                continue
            spans, seqs = _group_sequences(tree, node.children, size)
            sims = [
                fragment_similarity(seqs[i], seqs[i + 1]) for i in range(len(seqs) - 1)
            ]
            run_start = 0
            for i in range(len(spans)):
                at_break = i == len(spans) - 1 or sims[i] < tau
                if at_break:
                    run_end = i + 1
                    if run_end - run_start >= 2:
                        candidates.append(
                            SegCandidate(
                                parent=node.id,
                                group_size=size,
                                groups=spans[run_start:run_end],
                                similarities=sims[run_start : run_end - 1],
                            )
                        )
                    run_start = i + 1
    return candidates


def _group_text_chars(tree: DomTree, parent: int, span: tuple[int, int]) -> int:
    children = tree.node(parent).children[span[0] : span[1]]
    total = 0
    for child in children:
        for nid in tree.subtree(child):
            total += len(tree.node(nid).own_text)
    return total


def score_candidate(tree: DomTree, c: SegCandidate) -> float:
    """#groups x mean adjacent similarity x fraction of page text covered."""
    page_chars = sum(len(n.own_text) for n in tree.nodes())
    if page_chars == 0:
        return 0.0
    covered = sum(_group_text_chars(tree, c.parent, span) for span in c.groups)
    mean_sim = sum(c.similarities) / len(c.similarities)
    return len(c.groups) * mean_sim * (covered / page_chars)


def _first_text_node(tree: DomTree, roots: list[int]) -> int | None:
    for root in roots:
        for nid in tree.subtree(root):
            if tree.node(nid).own_text:
                return nid
    return None


def segment_mdr(tree: DomTree, tau: float = DEFAULT_TAU) -> Segmentation:
    """Pick the best-scoring candidate region; one boundary per group.

    Ties break toward the smallest parent pre-order id, then more groups.
    Groups containing no text node are skipped.
    """
    candidates = generate_candidates(tree, tau)
    if not candidates:
        raise NoRecordsFound("no repeated structure on page")
    for c in candidates:
        c.score = score_candidate(tree, c)
    best = min(candidates, key=lambda c: (-c.score, c.parent, -len(c.groups)))
    boundaries = []
    parent_children = tree.node(best.parent).children
    for a, b in best.groups:
        nid = _first_text_node(tree, list(parent_children[a:b]))
        if nid is not None:
            boundaries.append(tree.xpath_of(nid))
    return Segmentation(tuple(boundaries))


def segmentation_from_labels(
    tree: DomTree, labels: list[tuple[XPath, str]]
) -> Segmentation:
    """BEGIN-labeled nodes, document-ordered; textless BEGIN nodes are demoted
    to their first text descendant or dropped."""
    begin_ids: list[int] = []
    for xpath, label in labels:
        nid = tree.resolve(xpath)
        if nid is None:
            raise UnresolvedXPath(str(xpath))
        if label != "BEGIN":
            continue
        if tree.node(nid).own_text:
            begin_ids.append(nid)
            continue
        demoted = _first_text_node(tree, [nid])
        if demoted is None:
            log.warning("dropping textless BEGIN node %s", xpath)
        else:
            begin_ids.append(demoted)
    seen: set[int] = set()
    ordered = [i for i in sorted(begin_ids) if not (i in seen or seen.add(i))]
    return Segmentation(tuple(tree.xpath_of(i) for i in ordered))
