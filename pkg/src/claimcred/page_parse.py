"""Extract the claim, rating and origin sections from fact-check page HTML."""

from __future__ import annotations

import codecs
import html as html_mod
import re
from dataclasses import dataclass
from html.parser import HTMLParser

from .errors import UnratedPageError

_VOID_TAGS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)
_HEADER_TAGS = frozenset({"h1", "h2", "h3", "h4", "h5", "h6"})
_CHARSET_RE = re.compile(rb"charset=[\"']?([A-Za-z0-9_\-]+)")
_RATING_SLUG_RE = re.compile(r"^rating-label-(.+)$")

ORIGIN_HEADER_TEXT = "Origin"


@dataclass
class ParsedPage:
    claim_html: str
    rating_html: str
    origin_html: str
    claim_text: str
    rating_label: str
    origin_text: str
    source_url: str


class Element:
    __slots__ = ("tag", "attrs", "children", "parent")

    def __init__(self, tag, attrs, parent=None):
        self.tag = tag
        self.attrs = attrs
        self.children = []
        self.parent = parent

    @property
    def classes(self):
        return (self.attrs.get("class") or "").split()


class _TreeBuilder(HTMLParser):
    """Tolerant tree builder: stray end tags are ignored, unclosed elements
    are closed when an enclosing tag ends."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = Element("#root", {})
        self.stack = [self.root]

    def handle_starttag(self, tag, attrs):
        node = Element(tag, dict(attrs), parent=self.stack[-1])
        self.stack[-1].children.append(node)
        if tag not in _VOID_TAGS:
            self.stack.append(node)

    def handle_startendtag(self, tag, attrs):
        node = Element(tag, dict(attrs), parent=self.stack[-1])
        self.stack[-1].children.append(node)

    def handle_endtag(self, tag):
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return
        # no matching open tag; drop it

    def handle_data(self, data):
        if data:
            self.stack[-1].children.append(data)


def build_tree(text):
    builder = _TreeBuilder()
    builder.feed(text)
    builder.close()
    return builder.root


def decode_html(raw):
    """Decode page bytes: declared charset if present and known, else UTF-8."""
    if isinstance(raw, str):
        return raw
    m = _CHARSET_RE.search(raw[:2048])
    if m:
        name = m.group(1).decode("ascii", "replace")
        try:
            codecs.lookup(name)
            return raw.decode(name, errors="replace")
        except LookupError:
            pass
    return raw.decode("utf-8", errors="replace")


def iter_elements(node):
    for child in node.children:
        if isinstance(child, Element):
            yield child
            yield from iter_elements(child)


def element_html(node):
    """Serialize an element back to markup (text re-escaped)."""
    parts = ["<", node.tag]
    for key, value in node.attrs.items():
        if value is None:
            parts.append(" %s" % key)
        else:
            parts.append(' %s="%s"' % (key, html_mod.escape(value, quote=True)))
    parts.append(">")
    if node.tag in _VOID_TAGS:
        return "".join(parts)
    for child in node.children:
        if isinstance(child, Element):
            parts.append(element_html(child))
        else:
            parts.append(html_mod.escape(child, quote=False))
    parts.append("</%s>" % node.tag)
    return "".join(parts)


def node_text(node, skip=None):
    """Concatenated text content; entity references were decoded at parse time."""
    out = []

    def visit(n):
        if skip and n in skip:
            return
        for child in n.children:
            if isinstance(child, Element):
                visit(child)
            else:
                out.append(child)

    visit(node)
    return "".join(out)


def collapse_ws(text):
    return " ".join(text.split())


def rating_from_class(rating_html):
    """Rating slug from a "rating-label-<slug>" class, falling back to the
    element's inner text (lower-cased, spaces to hyphens)."""
    root = build_tree(rating_html)
    for el in iter_elements(root):
        for cls in el.classes:
            m = _RATING_SLUG_RE.match(cls)
            if m:
                return m.group(1).lower()
    text = collapse_ws(node_text(root))
    if text:
        return text.lower().replace(" ", "-")
    raise UnratedPageError("rating markup has neither a slug class nor text")


def parse_page_with_warnings(raw, url):
    """Parse one fact-check page; returns (ParsedPage, warnings).

    Raises UnratedPageError when the claim or the rating section is missing;
    a missing origin section is non-fatal (empty origin fields).
    """
    root = build_tree(decode_html(raw))
    warnings = []

    claims = [el for el in iter_elements(root) if "claim" in el.classes]
    ratings = [el for el in iter_elements(root) if "rating-name" in el.classes]
    if not claims:
        raise UnratedPageError("no element with class 'claim' in %s" % url)
    if not ratings:
        raise UnratedPageError("no element with class 'rating-name' in %s" % url)
    if len(claims) > 1:
        warnings.append("%d extra claim elements in %s" % (len(claims) - 1, url))
    if len(ratings) > 1:
        warnings.append("%d extra rating elements in %s" % (len(ratings) - 1, url))

    claim_el = claims[0]
    rating_el = ratings[0]

    origin_html = ""
    origin_text = ""
    for el in iter_elements(root):
        if el.tag in _HEADER_TAGS and collapse_ws(node_text(el)) == ORIGIN_HEADER_TEXT:
            container = el.parent if el.parent is not None and el.parent.tag != "#root" else el
            origin_html = element_html(container)
            origin_text = collapse_ws(node_text(container, skip={el}))
            break

    rating_html = element_html(rating_el)
    return (
        ParsedPage(
            claim_html=element_html(claim_el),
            rating_html=rating_html,
            origin_html=origin_html,
            claim_text=collapse_ws(node_text(claim_el)),
            rating_label=rating_from_class(rating_html),
            origin_text=origin_text,
            source_url=url,
        ),
        warnings,
    )


def parse_page(raw, url):
    page, _ = parse_page_with_warnings(raw, url)
    return page
