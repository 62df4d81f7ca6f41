"""Minimal lenient HTML DOM on top of html.parser.

Wiki pages in the wild carry unclosed cells, stray end tags, and ragged
nesting; this builder never raises on them. It implements just enough
of the HTML tree-construction rules for table work: auto-closing of
``td``/``th``/``tr`` and table sections, ``p`` and ``li`` recovery, and
block-aware visible-text extraction.
"""

from __future__ import annotations

import re
from html.parser import HTMLParser
from typing import Iterator

VOID_TAGS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)

# Tags whose boundaries break words when linearizing visible text.
BLOCK_TAGS = frozenset(
    (
        "address article aside blockquote body br caption center dd details div dl dt "
        "fieldset figcaption figure footer form h1 h2 h3 h4 h5 h6 header hr html li "
        "main nav ol p pre section summary table tbody td tfoot th thead tr ul"
    ).split()
)

HEADING_TAGS = frozenset(("h1", "h2", "h3", "h4", "h5", "h6"))

# Subtrees that contribute no visible text.
INVISIBLE_TAGS = frozenset(("script", "style", "template", "noscript"))

# Auto-close table: what an incoming start tag implicitly terminates,
# and the ancestor tags that bound the search.
_AUTO_CLOSE = {
    "td": (("td", "th"), ("tr", "table")),
    "th": (("td", "th"), ("tr", "table")),
    "tr": (("td", "th", "tr"), ("table", "thead", "tbody", "tfoot")),
    "thead": (("td", "th", "tr", "thead", "tbody", "tfoot"), ("table",)),
    "tbody": (("td", "th", "tr", "thead", "tbody", "tfoot"), ("table",)),
    "tfoot": (("td", "th", "tr", "thead", "tbody", "tfoot"), ("table",)),
    "caption": (("td", "th", "tr"), ("table",)),
    "li": (("li",), ("ul", "ol")),
    "p": (("p",), ("table", "td", "th", "div", "body")),
}

_WS_RE = re.compile(r"\s+")


class TextNode:
    __slots__ = ("text", "parent")

    def __init__(self, text: str, parent: "Element | None" = None):
        self.text = text
        self.parent = parent

    def __repr__(self):
        return f"TextNode({self.text!r})"


class Element:
    __slots__ = ("tag", "attrs", "children", "parent")

    def __init__(self, tag: str, attrs: dict[str, str] | None = None):
        self.tag = tag
        self.attrs = attrs or {}
        self.children: list[Element | TextNode] = []
        self.parent: Element | None = None

    def __repr__(self):
        return f"<{self.tag} children={len(self.children)}>"

    def append(self, node: "Element | TextNode") -> None:
        node.parent = self
        self.children.append(node)

    def get(self, name: str, default: str | None = None) -> str | None:
        return self.attrs.get(name, default)

    def iter(self) -> Iterator["Element"]:
        """All element descendants including self, in document order."""
        stack: list[Element] = [self]
        while stack:
            el = stack.pop()
            yield el
            stack.extend(
                child for child in reversed(el.children) if isinstance(child, Element)
            )

    def find_all(self, tag: str) -> list["Element"]:
        return [el for el in self.iter() if el.tag == tag]

    def child_elements(self, tag: str | None = None) -> list["Element"]:
        out = [c for c in self.children if isinstance(c, Element)]
        if tag is not None:
            out = [c for c in out if c.tag == tag]
        return out

    def ancestors(self) -> Iterator["Element"]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = Element("#document")
        self.stack: list[Element] = [self.root]

    # -- helpers -------------------------------------------------------

    def _auto_close(self, tag: str) -> None:
        rule = _AUTO_CLOSE.get(tag)
        if rule is None:
            return
        closable, boundaries = rule
        while len(self.stack) > 1:
            top = self.stack[-1].tag
            if top in boundaries:
                return
            if top in closable:
                self.stack.pop()
            else:
                return

    # -- parser events -------------------------------------------------

    def handle_starttag(self, tag, attrs):
        tag = tag.lower()
        self._auto_close(tag)
        # first occurrence of a duplicated attribute wins
        attr_dict: dict[str, str] = {}
        for name, value in attrs:
            attr_dict.setdefault(name.lower(), value if value is not None else "")
        el = Element(tag, attr_dict)
        self.stack[-1].append(el)
        if tag not in VOID_TAGS:
            self.stack.append(el)

    def handle_startendtag(self, tag, attrs):
        tag = tag.lower()
        self._auto_close(tag)
        attr_dict: dict[str, str] = {}
        for name, value in attrs:
            attr_dict.setdefault(name.lower(), value if value is not None else "")
        self.stack[-1].append(Element(tag, attr_dict))

    def handle_endtag(self, tag):
        tag = tag.lower()
        if tag in VOID_TAGS:
            return
        # Find the nearest matching open element; ignore the end tag if
        # nothing matches (stray </td> and friends).
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return

    def handle_data(self, data):
        if data:
            self.stack[-1].append(TextNode(data))

    def error(self, message):  # pragma: no cover - removed in py3.10 but kept safe
        pass


def parse_html(html: str) -> Element:
    """Parse HTML leniently into a DOM; never raises on malformed markup."""
    builder = _TreeBuilder()
    builder.feed(html)
    builder.close()
    return builder.root


def walk(root: Element):
    """Depth-first event stream: ("enter", el), ("text", node), ("exit", el)."""
    stack: list[tuple[str, Element | TextNode]] = [("enter", root)]
    while stack:
        kind, node = stack.pop()
        if kind == "enter" and isinstance(node, Element):
            yield ("enter", node)
            stack.append(("exit", node))
            for child in reversed(node.children):
                if isinstance(child, Element):
                    stack.append(("enter", child))
                else:
                    stack.append(("text", child))
        elif kind == "text":
            yield ("text", node)
        else:
            yield ("exit", node)


def visible_text(el: Element, skip_tags: frozenset[str] = frozenset()) -> str:
    """Visible text of a subtree with block boundaries as word breaks.

    Inline markup does not split words (``a<b>b</b>`` is one word "ab");
    block elements and <br> do. Subtrees whose tag is in ``skip_tags``
    or is inherently invisible (script/style) contribute nothing.
    """
    parts: list[str] = []
    buf: list[str] = []
    skip_depth = 0

    def flush():
        if buf:
            run = _WS_RE.sub(" ", "".join(buf)).strip()
            if run:
                parts.append(run)
            buf.clear()

    for kind, node in walk(el):
        if kind == "enter":
            assert isinstance(node, Element)
            if node is not el and (node.tag in skip_tags or node.tag in INVISIBLE_TAGS):
                if skip_depth == 0 and node.tag in BLOCK_TAGS:
                    flush()
                skip_depth += 1
            elif skip_depth == 0 and node.tag in BLOCK_TAGS:
                flush()
        elif kind == "text":
            if skip_depth == 0:
                buf.append(node.text)
        else:
            assert isinstance(node, Element)
            if node is not el and (node.tag in skip_tags or node.tag in INVISIBLE_TAGS):
                skip_depth -= 1
                if skip_depth == 0 and node.tag in BLOCK_TAGS:
                    flush()
            elif skip_depth == 0 and node.tag in BLOCK_TAGS:
                flush()
    flush()
    return " ".join(parts)


def nearest_ancestor(el: Element, tag: str) -> Element | None:
    for anc in el.ancestors():
        if anc.tag == tag:
            return anc
    return None
