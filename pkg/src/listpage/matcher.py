"""Minimal-unique-prefix matching of classified attributes to records.

Each record boundary gets the shortest xpath prefix shared with no other
boundary; an attribute belongs to the record whose prefix prefixes its
xpath. Prefixes are pairwise non-prefixing, so the assignment is unique.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .classifier import LabeledNode
from .dom import XPath
from .segmenter import Segmentation


class NestedBoundariesWarning(UserWarning):
    """One boundary is an ancestor of another; the ancestor keeps its full
    xpath as its prefix."""


@dataclass(frozen=True)
class PrefixIndex:
    prefixes: tuple[XPath, ...]
    origin: tuple[XPath, ...]

    def __len__(self) -> int:
        return len(self.prefixes)


@dataclass
class RecordExtraction:
    record_index: int
    attributes: list[LabeledNode] = field(default_factory=list)
    prefix: XPath | None = None


def _count_trie(boundaries: tuple[XPath, ...]) -> dict:
    """Trie over xpath steps; each node counts boundaries passing through."""
    root: dict = {"#count": 0, "#kids": {}}
    for b in boundaries:
        node = root
        for step in b.steps:
            node["#count"] += 1
            node = node["#kids"].setdefault(step, {"#count": 0, "#kids": {}})
        node["#count"] += 1
    return root


def build_prefix_index(boundaries: Segmentation) -> PrefixIndex:
    """For each boundary, the shortest prefix unique to it among boundaries.

    A boundary that is an ancestor of another has no unique prefix; its full
    xpath is used and a NestedBoundariesWarning is emitted.
    """
    origin = tuple(boundaries.boundaries)
    trie = _count_trie(origin)
    prefixes: list[XPath] = []
    for b in origin:
        node = trie
        chosen: XPath | None = None
        for k, step in enumerate(b.steps, start=1):
            node = node["#kids"][step]
            if node["#count"] == 1:
                chosen = XPath(b.steps[:k])
                break
        if chosen is None:
            warnings.warn(
                f"boundary {b} is an ancestor of another boundary",
                NestedBoundariesWarning,
                stacklevel=2,
            )
            chosen = b
        prefixes.append(chosen)
    return PrefixIndex(tuple(prefixes), origin)


def match_attributes(
    index: PrefixIndex, attrs: list[LabeledNode]
) -> tuple[list[RecordExtraction], list[LabeledNode]]:
    """Route each attribute to the record whose prefix prefixes its xpath.

    Attributes under no prefix land in the unmatched list; every record
    appears in the output even when empty. When nested boundaries forced
    overlapping prefixes, the longest matching prefix wins.
    """
    records = [
        RecordExtraction(record_index=i, prefix=p)
        for i, p in enumerate(index.prefixes)
    ]
    unmatched: list[LabeledNode] = []
    for attr in attrs:
        best = None
        for i, p in enumerate(index.prefixes):
            if p.is_prefix_of(attr.xpath):
                if best is None or len(p) > len(index.prefixes[best]):
                    best = i
        if best is None:
            unmatched.append(attr)
        else:
            records[best].attributes.append(attr)
    return records, unmatched
