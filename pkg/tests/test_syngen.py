import pytest

from listpage.corpus import dedupe, is_duplicate, load_corpus, record_key
from listpage.syngen import (
    CorpusSpec,
    PageSpec,
    generate_corpus,
    generate_corpus_pages,
    generate_page,
)


class TestGeneratePage:
    def test_deterministic(self):
        spec = PageSpec(seed=4, n_records=5)
        html_a, page_a = generate_page(spec)
        html_b, page_b = generate_page(spec)
        assert html_a == html_b
        assert page_a.records == page_b.records

    def test_annotations_validate(self):
        for tpl in ("flat_list", "card_grid", "header_pairs"):
            for seed in range(5):
                _, page = generate_page(PageSpec(seed=seed, n_records=4, template=tpl))
                page.validate()

    def test_boundary_is_first_text_node_of_record(self):
        _, page = generate_page(PageSpec(seed=8, n_records=4, template="card_grid"))
        tree = page.html
        for rec in page.records:
            nid = tree.resolve(rec.boundary)
            assert tree.node(nid).own_text
            # no earlier text node shares the record's prefix region
            for other in tree.text_nodes():
                if other < nid:
                    assert not rec.boundary.is_prefix_of(tree.xpath_of(other))

    def test_multi_tag_range(self):
        _, page = generate_page(
            PageSpec(seed=6, n_records=6, multi_tag_range=(2, 4))
        )
        for rec in page.records:
            n_tags = sum(1 for a in rec.attributes if a.label == "tag")
            assert 2 <= n_tags <= 4

    def test_full_date_dropout(self):
        _, page = generate_page(
            PageSpec(seed=5, n_records=5, optional_attr_dropout=1.0)
        )
        labels = {a.label for r in page.records for a in r.attributes}
        assert "date" not in labels

    def test_min_records_enforced(self):
        with pytest.raises(ValueError):
            PageSpec(seed=1, n_records=1)


class TestGenerateCorpus:
    def test_byte_identical_runs(self, tmp_path):
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        cspec = CorpusSpec(n_pages=8, seed=11, noise=("nav", "footer"))
        generate_corpus(cspec, a_dir)
        generate_corpus(cspec, b_dir)
        for f in sorted(a_dir.iterdir()):
            assert f.read_bytes() == (b_dir / f.name).read_bytes()

    def test_loadable_corpus(self, tmp_path):
        generate_corpus(CorpusSpec(n_pages=10, seed=2), tmp_path)
        pages = load_corpus(tmp_path)
        assert len(pages) == 10
        for page in pages:
            page.validate()

    def test_duplicate_injection_flagged(self):
        cspec = CorpusSpec(n_pages=30, seed=13, duplicate_fraction=0.5)
        pages = [p for _, p in generate_corpus_pages(cspec)]
        _, dropped = dedupe(pages)
        assert dropped  # injected duplicates exceed the 25% threshold

    def test_no_duplicates_without_injection(self):
        cspec = CorpusSpec(n_pages=30, seed=13)
        pages = [p for _, p in generate_corpus_pages(cspec)]
        seen = set()
        for page in pages:
            assert not is_duplicate(page, seen)
            seen.update(record_key(r) for r in page.records)
