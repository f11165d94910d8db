"""Attribute labeling of DOM nodes: a deterministic heuristic baseline and a
client path for an external node labeler."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources

from .dom import DomTree, XPath, normalize_text

ATTRIBUTE_LABELS = ("title", "tag", "date")
HEADING_TAGS = frozenset(["h1", "h2", "h3", "h4", "h5", "h6"])


@dataclass(frozen=True)
class LabeledNode:
    xpath: XPath
    label: str
    text: str


@dataclass(frozen=True)
class ClassifyRequest:
    context: str  # "page" | "record"
    page_id: str
    nodes: tuple[tuple[XPath, str, str], ...]  # (xpath, tag, text)
    fragment_root: XPath | None = None

    def __post_init__(self):
        if self.context not in ("page", "record"):
            raise ValueError(f"bad context {self.context!r}")
        if self.context == "record" and self.fragment_root is None:
            raise ValueError("record context requires fragment_root")


def _load_date_patterns() -> list[re.Pattern]:
    raw = resources.files("listpage").joinpath("data/date_patterns.json").read_text()
    return [re.compile(p, re.IGNORECASE) for p in json.loads(raw)["patterns"]]


_DATE_PATTERNS = _load_date_patterns()


def is_date_text(text: str) -> bool:
    text = normalize_text(text)
    return any(p.fullmatch(text) for p in _DATE_PATTERNS)


def scope_node_ids(tree: DomTree, scope: XPath | None) -> list[int]:
    """Pre-order ids of text-bearing nodes within the scope prefix."""
    if scope is None:
        return tree.text_nodes()
    root = tree.resolve(scope)
    if root is None:
        return []
    return [nid for nid in tree.subtree(root) if tree.node(nid).own_text]


def classify_heuristic(tree: DomTree, scope: XPath | None = None) -> list[LabeledNode]:
    """Rule-based title/tag/date labeling within a scope.

    Dates match a pattern table; tags are short anchor texts repeated under a
    shared parent; the title is the longest remaining heading/anchor text
    (at most one per scope, earliest wins ties).
    """
    ids = scope_node_ids(tree, scope)
    labels: dict[int, str] = {}
    for nid in ids:
        if is_date_text(tree.node(nid).own_text):
            labels[nid] = "date"

    tag_groups: dict[int, list[int]] = {}
    for nid in ids:
        node = tree.node(nid)
        if nid in labels or node.tag != "a":
            continue
        if len(node.own_text.split()) <= 3:
            tag_groups.setdefault(node.parent, []).append(nid)
    for group in tag_groups.values():
        if len(group) >= 2:
            for nid in group:
                labels[nid] = "tag"

    title_id = None
    for nid in ids:
        node = tree.node(nid)
        if nid in labels or node.tag not in HEADING_TAGS and node.tag != "a":
            continue
        if title_id is None or len(node.own_text) > len(tree.node(title_id).own_text):
            title_id = nid
    if title_id is not None:
        labels[title_id] = "title"

    return [
        LabeledNode(tree.xpath_of(nid), labels[nid], tree.node(nid).own_text)
        for nid in sorted(labels)
    ]


def make_request(
    tree: DomTree, context: str, page_id: str, fragment_root: XPath | None = None
) -> ClassifyRequest:
    ids = scope_node_ids(tree, fragment_root)
    nodes = tuple(
        (tree.xpath_of(nid), tree.node(nid).tag, tree.node(nid).own_text)
        for nid in ids
    )
    return ClassifyRequest(
        context=context, page_id=page_id, nodes=nodes, fragment_root=fragment_root
    )


def classify_external(endpoint, request: ClassifyRequest) -> list[LabeledNode]:
    """Query the labeler over the wire protocol and validate its answer.

    Unknown labels or xpaths outside the request raise ProtocolViolation;
    `out` nodes are dropped from the result.
    """
    from .labeler_client import query_labels

    allowed = set(ATTRIBUTE_LABELS) | {"out"}
    pairs = query_labels(
        endpoint,
        task="classify",
        context=request.context,
        page_id=request.page_id,
        nodes=request.nodes,
        allowed_labels=allowed,
    )
    text_by_xpath = {xp: text for xp, _, text in request.nodes}
    return [
        LabeledNode(xp, label, text_by_xpath[xp])
        for xp, label in pairs
        if label != "out"
    ]
