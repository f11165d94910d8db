import pytest
from hypothesis import given, strategies as st

from listpage.dom import (
    DomTree,
    EncodingError,
    UnknownNode,
    XPath,
    XPathSyntaxError,
    parse_html,
    positional_xpath,
    serialize_html,
    text_nodes,
)


def tags(tree):
    return [n.tag for n in tree.nodes()]


class TestParseHtml:
    def test_minimal_document(self):
        tree = parse_html(b"<html><body><p>Hi</p></body></html>")
        assert tags(tree) == ["html", "body", "p"]
        p = tree.node(2)
        assert p.tag == "p" and p.own_text == "Hi"

    def test_unclosed_li_becomes_siblings(self):
        # HTML5 tree construction: a new <li> implicitly closes the open one
        tree = parse_html(b"<ul><li>a<li>b</ul>")
        ul = next(n for n in tree.nodes() if n.tag == "ul")
        assert [tree.node(c).tag for c in ul.children] == ["li", "li"]
        assert [tree.node(c).own_text for c in ul.children] == ["a", "b"]

    def test_empty_body(self):
        tree = parse_html(b"<html><body></body></html>")
        assert tags(tree) == ["html", "body"]
        assert text_nodes(tree) == []

    def test_p_closed_by_block(self):
        tree = parse_html(b"<body><p>x<div>y</div></body>")
        body = next(n for n in tree.nodes() if n.tag == "body")
        assert [tree.node(c).tag for c in body.children] == ["p", "div"]

    def test_fragment_gets_html_body(self):
        tree = parse_html(b"<div>x</div>")
        assert tags(tree)[:2] == ["html", "body"]

    def test_head_content_separated(self):
        tree = parse_html(b"<title>t</title><p>x</p>")
        html = tree.node(0)
        assert [tree.node(c).tag for c in html.children] == ["head", "body"]

    def test_comments_dropped(self):
        tree = parse_html(b"<div><!-- note --><p>x</p></div>")
        assert "#comment" not in tags(tree)
        div = next(n for n in tree.nodes() if n.tag == "div")
        assert div.own_text == ""

    def test_script_text_excluded(self):
        tree = parse_html(b"<div><script>var x = 1;</script><p>t</p></div>")
        script = next(n for n in tree.nodes() if n.tag == "script")
        assert script.own_text == ""

    def test_whitespace_collapsed(self):
        tree = parse_html("<p>  a \n\t b  </p>".encode())
        p = next(n for n in tree.nodes() if n.tag == "p")
        assert p.own_text == "a b"

    def test_void_elements(self):
        tree = parse_html(b"<p>a<br>b</p>")
        p = next(n for n in tree.nodes() if n.tag == "p")
        assert [tree.node(c).tag for c in p.children] == ["br"]
        assert p.own_text == "a b"

    def test_stray_end_tag_ignored(self):
        tree = parse_html(b"<div></span><p>x</p></div>")
        assert "span" not in tags(tree)

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            parse_html(b"")

    def test_bad_encoding(self):
        data = "<p>привет</p>".encode("cp1251")
        with pytest.raises(EncodingError):
            parse_html(data)
        tree = parse_html(data, encoding_hint="cp1251")
        p = next(n for n in tree.nodes() if n.tag == "p")
        assert p.own_text == "привет"


class TestXPath:
    def test_root_xpath(self):
        tree = parse_html(b"<html><body></body></html>")
        assert str(positional_xpath(tree, 0)) == "/html[1]"

    def test_second_li_index(self):
        tree = parse_html(b"<html><body><ul><li>a</li><li>b</li></ul></body></html>")
        second = text_nodes(tree)[1]
        assert str(tree.xpath_of(second)) == "/html[1]/body[1]/ul[1]/li[2]"

    def test_sibling_div_indices(self):
        tree = parse_html(b"<body><div>a</div><div>b</div></body>")
        a, b = text_nodes(tree)
        assert tree.xpath_of(a).steps[-1] == ("div", 1)
        assert tree.xpath_of(b).steps[-1] == ("div", 2)

    def test_mixed_sibling_indices(self):
        tree = parse_html(b"<body><a>1</a><div>2</div><a>3</a></body>")
        body = next(n for n in tree.nodes() if n.tag == "body")
        steps = [tree.xpath_of(c).steps[-1] for c in body.children]
        assert steps == [("a", 1), ("div", 1), ("a", 2)]

    def test_parse_serialize_roundtrip(self):
        s = "/html[1]/body[1]/ul[1]/li[2]/a[1]"
        assert str(XPath.parse(s)) == s

    def test_parse_rejects_garbage(self):
        for bad in ("", "html[1]", "/html", "/html[0]", "/html[1]/"):
            with pytest.raises(XPathSyntaxError):
                XPath.parse(bad)

    def test_prefix_relation(self):
        a = XPath.parse("/html[1]/body[1]")
        b = XPath.parse("/html[1]/body[1]/div[2]")
        assert a.is_prefix_of(b)
        assert a.is_prefix_of(a)
        assert not b.is_prefix_of(a)

    def test_unknown_node(self):
        tree = parse_html(b"<p>x</p>")
        with pytest.raises(UnknownNode):
            tree.xpath_of(999)


# random tree HTML via nested divs/spans with depth cap
@st.composite
def random_html(draw):
    def element(depth):
        tag = draw(st.sampled_from(["div", "span", "p", "li", "b"]))
        n_kids = draw(st.integers(0, 3)) if depth < 3 else 0
        kids = "".join(element(depth + 1) for _ in range(n_kids))
        text = draw(st.sampled_from(["", "x", "word up"]))
        return f"<{tag}>{text}{kids}</{tag}>"

    return "<html><body>" + element(0) + element(0) + "</body></html>"


class TestTreeProperties:
    @given(random_html())
    def test_xpath_roundtrip_and_injective(self, html):
        tree = parse_html(html.encode())
        seen = set()
        for n in tree.nodes():
            xp = tree.xpath_of(n.id)
            assert XPath.parse(str(xp)) == xp
            assert xp not in seen
            seen.add(xp)
            assert tree.resolve(xp) == n.id

    @given(random_html())
    def test_prefix_agrees_with_ancestry(self, html):
        tree = parse_html(html.encode())
        # brute-force ancestor-or-self via parent chains
        for a in tree.nodes():
            ancestors = set()
            cur = a.id
            while cur is not None:
                ancestors.add(cur)
                cur = tree.node(cur).parent
            for b in tree.nodes():
                is_anc = b.id in ancestors
                assert tree.xpath_of(b.id).is_prefix_of(tree.xpath_of(a.id)) == is_anc

    @given(random_html())
    def test_preorder_ids_increase_in_document_order(self, html):
        tree = parse_html(html.encode())
        for n in tree.nodes():
            for c in n.children:
                assert c > n.id
            assert list(n.children) == sorted(n.children)

    @given(random_html())
    def test_subtree_range_is_contiguous(self, html):
        tree = parse_html(html.encode())
        for n in tree.nodes():
            ids = tree.subtree(n.id)
            descendants = set()
            stack = [n.id]
            while stack:
                cur = stack.pop()
                descendants.add(cur)
                stack.extend(tree.node(cur).children)
            assert set(ids) == descendants


def test_serialize_reparse_stable():
    tree = parse_html(b"<html><body><ul><li>a</li><li>b</li></ul></body></html>")
    again = parse_html(serialize_html(tree).encode())
    assert tags(tree) == tags(again)
    assert [n.own_text for n in tree.nodes()] == [n.own_text for n in again.nodes()]
