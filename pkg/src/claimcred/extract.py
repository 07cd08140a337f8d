"""URL extraction from post text and shortened-link resolution."""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urljoin, urlparse

from .errors import HopBudgetError, RedirectLoopError

# Optional scheme, optional www, dotted domain (or IPv4), optional port,
# optional path. Character classes are uppercase but URLs in the wild are
# lowercase, so the pattern is compiled case-insensitively.
URL_PATTERN = (
    r"((?:(https?|s?ftp):\/\/)?(?:www\.)?"
    r"((?:(?:[A-Z0-9][a-zA-Z0-9-]{0,61}[A-Z0-9]*\.)+)([A-Z]{2,6})"
    r"|(?:\d{1,3}\.\d{1,3}\.\d{1,3}\.\d{1,3}))"
    r"(?::(\d{1,5}))?(?:(\/\S+)*))"
)
URL_RE = re.compile(URL_PATTERN, re.IGNORECASE)

SCHEMES = ("http", "https", "ftp", "sftp", "none")

# Schemes the crawler will actually follow; bare-domain matches (scheme
# "none") stay in the output but are never fetched.
CRAWLABLE_SCHEMES = ("http", "https")

DEFAULT_MAX_HOPS = 10


@dataclass
class ExtractedUrl:
    raw: str
    scheme: str
    host: str
    resolved: str | None = None
    source_record_id: int = 0

    @property
    def crawlable(self):
        return self.scheme in CRAWLABLE_SCHEMES


def extract_urls(text, source_record_id=0):
    """Return all URL matches in ``text``, left to right, non-overlapping.

    Matches without an explicit scheme get scheme "none"; they are kept for
    reporting but excluded from crawling.
    """
    found = []
    for m in URL_RE.finditer(text):
        scheme = (m.group(2) or "none").lower()
        found.append(
            ExtractedUrl(
                raw=m.group(0),
                scheme=scheme,
                host=m.group(3),
                source_record_id=source_record_id,
            )
        )
    return found


def strip_urls(text):
    """Remove every URL match from ``text``, replacing it with a space."""
    return URL_RE.sub(" ", text)


def resolve_redirects(url, max_hops=DEFAULT_MAX_HOPS, *, crawler):
    """Follow HTTP 3xx redirects and return the final URL.

    Fetching goes through ``crawler`` so rate limits, retries and the cache
    apply to every hop. A terminal non-3xx response ends the walk; a loop or
    an exhausted hop budget raises with the visited chain.
    """
    parsed = urlparse(url)
    if parsed.scheme not in CRAWLABLE_SCHEMES:
        raise ValueError("resolve_redirects needs an http(s) URL, got %r" % url)
    if max_hops < 1:
        raise ValueError("max_hops must be >= 1")
    hops = crawler.follow(url, max_hops=max_hops)
    return hops[-1].requested_url


def follow_location(current_url, status, headers):
    """Next URL for a redirect response, or None if the walk terminates."""
    if status < 300 or status > 399:
        return None
    location = headers.get("location")
    if not location:
        return None
    return urljoin(current_url, location)


__all__ = [
    "URL_PATTERN",
    "URL_RE",
    "SCHEMES",
    "CRAWLABLE_SCHEMES",
    "DEFAULT_MAX_HOPS",
    "ExtractedUrl",
    "extract_urls",
    "strip_urls",
    "resolve_redirects",
    "follow_location",
    "RedirectLoopError",
    "HopBudgetError",
]
