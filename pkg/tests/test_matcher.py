import random

import pytest
from hypothesis import given, strategies as st

from listpage.classifier import LabeledNode
from listpage.dom import XPath
from listpage.matcher import (
    NestedBoundariesWarning,
    build_prefix_index,
    match_attributes,
)
from listpage.segmenter import Segmentation


def xp(s):
    return XPath.parse(s)


def seg(*paths):
    return Segmentation(tuple(xp(p) for p in paths))


# ---------------------------------------------------------------- oracles


def oracle_prefixes(boundaries):
    """Exhaustive scan: for each boundary, shortest prefix prefixing no other."""
    out = []
    for b in boundaries:
        chosen = None
        for k in range(1, len(b.steps) + 1):
            candidate = XPath(b.steps[:k])
            others = [o for o in boundaries if o != b]
            if not any(candidate.is_prefix_of(o) for o in others):
                chosen = candidate
                break
        out.append(chosen if chosen is not None else b)
    return out


def oracle_assignment(prefixes, attr_xpath):
    """All (prefix, attribute) pairs scanned; longest match wins."""
    matches = [i for i, p in enumerate(prefixes) if p.is_prefix_of(attr_xpath)]
    if not matches:
        return None
    return max(matches, key=lambda i: len(prefixes[i]))


def random_tree_paths(rng, max_nodes=200):
    """Leaf-ish xpaths of a random tree built by attaching children."""
    tags = ["div", "ul", "li", "span", "a", "p"]
    paths = [(("html", 1), ("body", 1))]
    all_paths = list(paths)
    while len(all_paths) < rng.randint(10, max_nodes):
        parent = rng.choice(all_paths)
        tag = rng.choice(tags)
        siblings = sum(
            1
            for q in all_paths
            if len(q) == len(parent) + 1 and q[: len(parent)] == parent and q[-1][0] == tag
        )
        all_paths.append(parent + ((tag, siblings + 1),))
    return [XPath(p) for p in all_paths]


# ------------------------------------------------------------------ tests


class TestBuildPrefixIndex:
    def test_li_siblings(self):
        s = seg(
            "/html[1]/body[1]/ul[1]/li[1]/a[1]",
            "/html[1]/body[1]/ul[1]/li[2]/a[1]",
        )
        index = build_prefix_index(s)
        assert [str(p) for p in index.prefixes] == [
            "/html[1]/body[1]/ul[1]/li[1]",
            "/html[1]/body[1]/ul[1]/li[2]",
        ]

    def test_singleton_shortest_wins(self):
        index = build_prefix_index(seg("/html[1]/body[1]/div[1]"))
        assert [str(p) for p in index.prefixes] == ["/html[1]"]

    def test_sibling_sections(self):
        s = seg("/html[1]/body[1]/div[1]/p[1]", "/html[1]/body[1]/div[2]/p[1]")
        index = build_prefix_index(s)
        assert [str(p) for p in index.prefixes] == [
            "/html[1]/body[1]/div[1]",
            "/html[1]/body[1]/div[2]",
        ]

    def test_matches_oracle_on_random_trees(self):
        rng = random.Random(42)
        for _ in range(50):
            paths = random_tree_paths(rng)
            k = min(len(paths), rng.randint(2, 10))
            boundaries = tuple(rng.sample(paths, k))
            # oracle handles nesting the same way (full path fallback)
            expect = oracle_prefixes(boundaries)
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore", NestedBoundariesWarning)
                got = build_prefix_index(Segmentation(boundaries)).prefixes
            assert list(got) == expect

    def test_nested_boundaries_warn(self):
        s = seg("/html[1]/body[1]/div[1]", "/html[1]/body[1]/div[1]/p[1]")
        with pytest.warns(NestedBoundariesWarning):
            index = build_prefix_index(s)
        assert str(index.prefixes[0]) == "/html[1]/body[1]/div[1]"

    def test_permutation_covariance(self):
        paths = (
            "/html[1]/body[1]/ul[1]/li[1]/a[1]",
            "/html[1]/body[1]/ul[1]/li[2]/a[1]",
            "/html[1]/body[1]/div[1]/p[1]",
        )
        fwd = build_prefix_index(seg(*paths)).prefixes
        rev = build_prefix_index(seg(*reversed(paths))).prefixes
        assert list(rev) == list(reversed(fwd))


class TestMatchAttributes:
    def _index(self):
        return build_prefix_index(
            seg(
                "/html[1]/body[1]/ul[1]/li[1]/a[1]",
                "/html[1]/body[1]/ul[1]/li[2]/a[1]",
            )
        )

    def test_attr_in_second_record(self):
        attr = LabeledNode(xp("/html[1]/body[1]/ul[1]/li[2]/span[1]"), "date", "d")
        records, unmatched = match_attributes(self._index(), [attr])
        assert unmatched == []
        assert records[1].attributes == [attr]
        assert records[0].attributes == []

    def test_outside_any_prefix(self):
        attr = LabeledNode(xp("/html[1]/body[1]/footer[1]/a[1]"), "date", "d")
        records, unmatched = match_attributes(self._index(), [attr])
        assert unmatched == [attr]
        assert all(r.attributes == [] for r in records)

    def test_attr_exactly_at_prefix(self):
        attr = LabeledNode(xp("/html[1]/body[1]/ul[1]/li[1]"), "title", "t")
        records, unmatched = match_attributes(self._index(), [attr])
        assert records[0].attributes == [attr]

    def test_empty_records_still_listed(self):
        records, _ = match_attributes(self._index(), [])
        assert [r.record_index for r in records] == [0, 1]


class TestProperties:
    @given(st.integers(0, 2**32 - 1))
    def test_nonprefixing_and_unique_assignment(self, seed):
        rng = random.Random(seed)
        paths = random_tree_paths(rng, max_nodes=60)
        k = min(len(paths), rng.randint(2, 8))
        boundaries = tuple(rng.sample(paths, k))
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NestedBoundariesWarning)
            index = build_prefix_index(Segmentation(boundaries))
        nested = any(
            a != b and a.is_prefix_of(b) for a in boundaries for b in boundaries
        )
        if not nested:
            for i, a in enumerate(index.prefixes):
                for j, b in enumerate(index.prefixes):
                    if i != j:
                        assert not a.is_prefix_of(b)
        # assignment agrees with the pair-scan oracle for every node
        attrs = [LabeledNode(p, "title", "x") for p in rng.sample(paths, 10)]
        records, unmatched = match_attributes(index, attrs)
        for attr in attrs:
            want = oracle_assignment(list(index.prefixes), attr.xpath)
            if want is None:
                assert attr in unmatched
            else:
                assert attr in records[want].attributes
