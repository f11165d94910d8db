import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

from listpage.classifier import ATTRIBUTE_LABELS, LabeledNode
from listpage.pipeline import PipelineConfig
from listpage.segmenter import Segmentation
from listpage.syngen import CorpusSpec, PageSpec, generate_corpus_pages, generate_page


def oracle_segmenter(page):
    """Segmentation taken straight from the annotation."""

    def seg(tree):
        return Segmentation(tuple(r.boundary for r in page.records))

    return seg


def oracle_classifier(page):
    """Annotation-derived labels, restricted to the requested scope."""

    def cls(tree, scope):
        out = []
        for rec in page.records:
            for a in rec.attributes:
                if a.label not in ATTRIBUTE_LABELS:
                    continue
                if scope is None or scope.is_prefix_of(a.xpath):
                    out.append(LabeledNode(a.xpath, a.label, a.text))
        return out

    return cls


def oracle_config(page, mode):
    return PipelineConfig(
        mode=mode,
        segmenter=oracle_segmenter(page),
        classifier=oracle_classifier(page),
    )


@pytest.fixture(scope="session")
def small_clean_corpus():
    """12 clean pages, in memory. Restricted to templates whose attributes
    all sit inside the record's prefix region (header_pairs places the meta
    row outside it, so the oracle-identity guarantee does not cover it)."""
    cspec = CorpusSpec(
        n_pages=12,
        seed=7,
        multi_tag_range=(1, 3),
        templates=("flat_list", "card_grid"),
    )
    return [page for _, page in generate_corpus_pages(cspec)]


@pytest.fixture(scope="session")
def flat_page():
    _, page = generate_page(
        PageSpec(seed=11, n_records=5, template="flat_list", multi_tag_range=(2, 3))
    )
    return page
