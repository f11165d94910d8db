"""Lenient HTML parsing into an immutable DOM tree with positional xpaths.

The tree stores elements only; character data is folded into each element's
``own_text`` (direct text children, whitespace-collapsed). Node ids are a
contiguous pre-order numbering with the root at 0, so a subtree always
occupies a contiguous id range.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from html.parser import HTMLParser


class EncodingError(ValueError):
    """Input bytes could not be decoded as UTF-8 (or the given hint)."""


class UnknownNode(KeyError):
    """Node id not present in the tree."""


class XPathSyntaxError(ValueError):
    """String is not a valid positional xpath."""


_WS_RE = re.compile(r"\s+")

_STEP_RE = re.compile(r"([a-zA-Z][a-zA-Z0-9_-]*)\[(\d+)\]")

VOID_ELEMENTS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)

_BLOCK = frozenset(
    "address article aside blockquote details div dl fieldset figcaption figure "
    "footer form h1 h2 h3 h4 h5 h6 header hr main menu nav ol p pre section "
    "table ul".split()
)

# start tag T implicitly closes an open element Y when T is in _CLOSED_BY[Y]
_CLOSED_BY = {
    "li": frozenset(["li"]),
    "dt": frozenset(["dt", "dd"]),
    "dd": frozenset(["dt", "dd"]),
    "p": _BLOCK,
    "tr": frozenset(["tr"]),
    "td": frozenset(["td", "th", "tr"]),
    "th": frozenset(["td", "th", "tr"]),
    "thead": frozenset(["tbody", "tfoot"]),
    "tbody": frozenset(["tbody", "tfoot"]),
    "option": frozenset(["option", "optgroup"]),
    "optgroup": frozenset(["optgroup"]),
}

_HEAD_ONLY = frozenset("title meta link base style".split())

_RAWTEXT = frozenset(["script", "style"])


def normalize_text(s: str) -> str:
    """Collapse runs of Unicode whitespace to single spaces and trim."""
    return _WS_RE.sub(" ", s).strip()


@dataclass(frozen=True)
class XPath:
    """Positional xpath: a path of (tag, 1-based same-tag sibling index) steps."""

    steps: tuple[tuple[str, int], ...]

    @classmethod
    def parse(cls, s: str) -> "XPath":
        if not s.startswith("/"):
            raise XPathSyntaxError(f"xpath must start with '/': {s!r}")
        steps = []
        for part in s[1:].split("/"):
            m = _STEP_RE.fullmatch(part)
            if m is None:
                raise XPathSyntaxError(f"bad xpath step {part!r} in {s!r}")
            idx = int(m.group(2))
            if idx < 1:
                raise XPathSyntaxError(f"xpath index must be >= 1 in {s!r}")
            steps.append((m.group(1).lower(), idx))
        if not steps:
            raise XPathSyntaxError(f"empty xpath {s!r}")
        return cls(tuple(steps))

    def __str__(self) -> str:
        return "".join(f"/{tag}[{i}]" for tag, i in self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def is_prefix_of(self, other: "XPath") -> bool:
        """True when our steps are a leading sublist of other's (equality counts)."""
        return other.steps[: len(self.steps)] == self.steps

    def prefix(self, k: int) -> "XPath":
        if not 1 <= k <= len(self.steps):
            raise ValueError(f"prefix length {k} out of range")
        return XPath(self.steps[:k])


@dataclass(frozen=True)
class DomNode:
    id: int
    tag: str
    parent: int | None
    children: tuple[int, ...]
    own_text: str
    attrs: dict[str, str]


class RawNode:
    """Mutable element used while building a tree; frozen into DomTree."""

    __slots__ = ("tag", "attrs", "children", "text_parts")

    def __init__(self, tag: str, attrs: dict[str, str] | None = None):
        self.tag = tag
        self.attrs = dict(attrs) if attrs else {}
        self.children: list[RawNode] = []
        self.text_parts: list[str] = []

    def add_text(self, data: str) -> None:
        self.text_parts.append(data)


class DomTree:
    """Immutable element tree; ids are contiguous pre-order, root id 0."""

    def __init__(self, nodes: list[DomNode], xpaths: list[XPath]):
        self._nodes = nodes
        self._xpaths = xpaths
        self._by_xpath = {xp: n.id for n, xp in zip(nodes, xpaths)}

    @property
    def root(self) -> int:
        return 0

    def __len__(self) -> int:
        return len(self._nodes)

    def node(self, node_id: int) -> DomNode:
        if not 0 <= node_id < len(self._nodes):
            raise UnknownNode(node_id)
        return self._nodes[node_id]

    def nodes(self):
        return iter(self._nodes)

    def xpath_of(self, node_id: int) -> XPath:
        if not 0 <= node_id < len(self._xpaths):
            raise UnknownNode(node_id)
        return self._xpaths[node_id]

    def resolve(self, xpath: XPath) -> int | None:
        return self._by_xpath.get(xpath)

    def subtree(self, node_id: int) -> range:
        """Contiguous id range of node_id's subtree (pre-order numbering)."""
        node = self.node(node_id)
        end = node_id + 1
        stack = list(node.children)
        count = 0
        while stack:
            count += 1
            stack.extend(self._nodes[stack.pop()].children)
        return range(node_id, end + count)

    def text_nodes(self) -> list[int]:
        """Pre-order ids of nodes with non-empty own_text."""
        return [n.id for n in self._nodes if n.own_text]

    def to_raw(self) -> RawNode:
        """Deep mutable copy, for filtered rebuilds."""

        def copy(node_id: int) -> RawNode:
            n = self._nodes[node_id]
            raw = RawNode(n.tag, n.attrs)
            raw.text_parts = [n.own_text]
            raw.children = [copy(c) for c in n.children]
            return raw

        return copy(self.root)


def freeze(root: RawNode) -> DomTree:
    """Assign pre-order ids and positional xpaths; normalize text."""
    nodes: list[DomNode] = []
    xpaths: list[XPath] = []

    def walk(raw: RawNode, parent: int | None, steps: tuple[tuple[str, int], ...]):
        node_id = len(nodes)
        nodes.append(None)  # placeholder, children filled below
        xpaths.append(XPath(steps))
        tag_counts: dict[str, int] = {}
        child_ids = []
        for child in raw.children:
            tag_counts[child.tag] = tag_counts.get(child.tag, 0) + 1
            child_ids.append(
                walk(child, node_id, steps + ((child.tag, tag_counts[child.tag]),))
            )
        nodes[node_id] = DomNode(
            id=node_id,
            tag=raw.tag,
            parent=parent,
            children=tuple(child_ids),
            own_text=normalize_text(" ".join(raw.text_parts)),
            attrs=dict(raw.attrs),
        )
        return node_id

    walk(root, None, ((root.tag, 1),))
    return DomTree(nodes, xpaths)


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.top = RawNode("#document")
        self.stack: list[RawNode] = [self.top]

    def _open(self, tag: str, attrs) -> RawNode:
        node = RawNode(tag)
        for name, value in attrs:
            name = name.lower()
            if name not in node.attrs:
                node.attrs[name] = value if value is not None else ""
        self.stack[-1].children.append(node)
        return node

    def handle_starttag(self, tag, attrs):
        tag = tag.lower()
        while len(self.stack) > 1 and tag in _CLOSED_BY.get(self.stack[-1].tag, ()):
            self.stack.pop()
        node = self._open(tag, attrs)
        if tag not in VOID_ELEMENTS:
            self.stack.append(node)

    def handle_startendtag(self, tag, attrs):
        self._open(tag.lower(), attrs)

    def handle_endtag(self, tag):
        tag = tag.lower()
        if tag in VOID_ELEMENTS:
            return
        for depth in range(len(self.stack) - 1, 0, -1):
            if self.stack[depth].tag == tag:
                del self.stack[depth:]
                return
        # stray end tag: ignored

    def handle_data(self, data):
        if self.stack[-1].tag in _RAWTEXT:
            return
        if data:
            self.stack[-1].add_text(data)


def _ensure_document(top: RawNode) -> RawNode:
    """Guarantee an html root with head/body structure around loose content."""
    html_children = [c for c in top.children if c.tag == "html"]
    if len(html_children) == 1 and not top.text_parts:
        root = html_children[0]
        for stray in top.children:
            if stray is not root:
                root.children.append(stray)
    else:
        root = RawNode("html")
        root.children = list(top.children)
        root.text_parts = list(top.text_parts)

    head = next((c for c in root.children if c.tag == "head"), None)
    body = next((c for c in root.children if c.tag == "body"), None)
    strays = [c for c in root.children if c.tag not in ("head", "body")]
    stray_text = [t for t in root.text_parts if normalize_text(t)]
    root.text_parts = []
    if strays or stray_text or body is None:
        for stray in strays:
            if stray.tag in _HEAD_ONLY:
                if head is None:
                    head = RawNode("head")
                head.children.append(stray)
        body_strays = [c for c in strays if c.tag not in _HEAD_ONLY]
        if body is None:
            body = RawNode("body")
        body.children.extend(body_strays)
        body.text_parts.extend(stray_text)
    root.children = ([head] if head is not None else []) + [body]
    return root


def parse_html(data: bytes | str, encoding_hint: str | None = None) -> DomTree:
    """Parse HTML leniently; malformed markup never raises.

    Comments and processing instructions are dropped; script/style character
    data never reaches own_text.
    """
    if isinstance(data, bytes):
        if not data:
            raise ValueError("empty document")
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError:
            if encoding_hint is None:
                raise EncodingError("input is not valid UTF-8 and no hint given")
            try:
                text = data.decode(encoding_hint)
            except (UnicodeDecodeError, LookupError) as exc:
                raise EncodingError(f"undecodable input: {exc}") from exc
    else:
        if not data:
            raise ValueError("empty document")
        text = data

    builder = _TreeBuilder()
    builder.feed(text)
    builder.close()
    return freeze(_ensure_document(builder.top))


def serialize_html(tree: DomTree) -> str:
    """Render the element tree back to HTML (own_text before child elements)."""
    from html import escape

    out: list[str] = ["<!DOCTYPE html>"]

    def walk(node_id: int) -> None:
        n = tree.node(node_id)
        attrs = "".join(f' {k}="{escape(v, quote=True)}"' for k, v in n.attrs.items())
        if n.tag in VOID_ELEMENTS:
            out.append(f"<{n.tag}{attrs}>")
            return
        out.append(f"<{n.tag}{attrs}>")
        if n.own_text:
            out.append(escape(n.own_text))
        for child in n.children:
            walk(child)
        out.append(f"</{n.tag}>")

    walk(tree.root)
    return "".join(out)


def positional_xpath(tree: DomTree, node_id: int) -> XPath:
    """Positional xpath of node_id; injective over the tree."""
    return tree.xpath_of(node_id)


def text_nodes(tree: DomTree) -> list[int]:
    return tree.text_nodes()
