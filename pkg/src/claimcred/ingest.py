"""Feed-record ingestion: paginated JSON page files, validation, dedup, tokens."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from . import extract
from .errors import ParseError, SchemaError

PAGE_RECORD_CAP = 200

# Input field names -> FeedRecord attributes. The input schema is the raw
# feed-page format; unknown extra fields are ignored.
_REQUIRED_FIELDS = ("tweets", "id", "len", "date", "source", "likes", "retweets", "time")

# \W plus underscore: exactly the characters str.isalnum rejects
_WORD_SPLIT_RE = re.compile(r"[\W_]+")

_MAX_ID = 2**64 - 1


@dataclass
class FeedRecord:
    text: str
    id: int
    length: int
    date_ms: int
    source: str
    likes: int
    retweets: int
    time_ms: int
    geo: str | None = None
    sentiment_hint: int | None = None
    token_list: list[str] = field(default_factory=list)


@dataclass
class FeedPage:
    page_index: int
    records: list[FeedRecord]
    collected_at: int


@lru_cache(maxsize=1)
def default_stopwords():
    text = resources.files("claimcred.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(load_stopwords_text(text))


def load_stopwords_text(text):
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return words


def split_words(text):
    """Split on any non-alphanumeric character, dropping empty pieces."""
    return [w for w in _WORD_SPLIT_RE.split(text) if w]


def tokenize(text, stopwords=None):
    """URL-strip, split on non-alphanumerics, then drop stopwords.

    Stopword matching is exact (case-sensitive) against a lowercase list, so
    sentence-initial capitalized words survive. Token casing is preserved.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    words = split_words(extract.strip_urls(text))
    return [w for w in words if w not in stopwords]


def _require_int(value, *, key, fld, path, minimum=None, maximum=None):
    # bool is an int subclass; JSON true/false must not pass as counts.
    if type(value) is not int:
        raise SchemaError("%s: record %r field %r must be an integer" % (path, key, fld))
    if minimum is not None and value < minimum:
        raise SchemaError("%s: record %r field %r below %d" % (path, key, fld, minimum))
    if maximum is not None and value > maximum:
        raise SchemaError("%s: record %r field %r above %d" % (path, key, fld, maximum))
    return value


def _require_str(value, *, key, fld, path):
    if not isinstance(value, str):
        raise SchemaError("%s: record %r field %r must be a string" % (path, key, fld))
    return value


def record_from_json(key, obj, path="<memory>", stopwords=None):
    """Validate one raw record object and map it onto a FeedRecord."""
    if not isinstance(obj, dict):
        raise SchemaError("%s: record %r is not an object" % (path, key))
    for fld in _REQUIRED_FIELDS:
        if fld not in obj:
            raise SchemaError("%s: record %r missing required field %r" % (path, key, fld))

    text = _require_str(obj["tweets"], key=key, fld="tweets", path=path)
    rec_id = _require_int(obj["id"], key=key, fld="id", path=path, minimum=0, maximum=_MAX_ID)
    length = _require_int(obj["len"], key=key, fld="len", path=path)
    if length != len(text):
        raise SchemaError(
            "%s: record %r field 'len' is %d but text has %d characters"
            % (path, key, length, len(text))
        )

    geo = obj.get("geo")
    if geo is not None and not isinstance(geo, str):
        raise SchemaError("%s: record %r field 'geo' must be a string or null" % (path, key))

    hint = obj.get("sentiment")
    if hint is not None:
        hint = _require_int(hint, key=key, fld="sentiment", path=path)
        if hint not in (-1, 0, 1):
            raise SchemaError(
                "%s: record %r field 'sentiment' must be -1, 0 or 1" % (path, key)
            )

    tokens = obj.get("token_list")
    if tokens is None:
        tokens = tokenize(text, stopwords=stopwords)
    else:
        if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
            raise SchemaError(
                "%s: record %r field 'token_list' must be a list of strings" % (path, key)
            )
        for t in tokens:
            if not any(ch.isalnum() for ch in t):
                raise SchemaError(
                    "%s: record %r token_list has punctuation-only token %r" % (path, key, t)
                )
            if extract.URL_RE.search(t):
                raise SchemaError(
                    "%s: record %r token_list contains a URL token %r" % (path, key, t)
                )

    return FeedRecord(
        text=text,
        id=rec_id,
        length=length,
        date_ms=_require_int(obj["date"], key=key, fld="date", path=path),
        source=_require_str(obj["source"], key=key, fld="source", path=path),
        likes=_require_int(obj["likes"], key=key, fld="likes", path=path, minimum=0),
        retweets=_require_int(obj["retweets"], key=key, fld="retweets", path=path, minimum=0),
        time_ms=_require_int(obj["time"], key=key, fld="time", path=path),
        geo=geo,
        sentiment_hint=hint,
        token_list=list(tokens),
    )


def record_to_json(rec):
    """Serialize back to the input page schema (inverse of record_from_json)."""
    return {
        "tweets": rec.text,
        "id": rec.id,
        "len": rec.length,
        "date": rec.date_ms,
        "source": rec.source,
        "likes": rec.likes,
        "retweets": rec.retweets,
        "time": rec.time_ms,
        "geo": rec.geo,
        "sentiment": rec.sentiment_hint,
        "token_list": list(rec.token_list),
    }


def page_to_json(page):
    return {str(i): record_to_json(rec) for i, rec in enumerate(page.records)}


def load_page_text(text, path="<memory>", page_index=1, stopwords=None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        byte_offset = len(text[: exc.pos].encode("utf-8"))
        raise ParseError(
            "%s: malformed JSON at byte %d: %s" % (path, byte_offset, exc.msg)
        ) from exc
    if not isinstance(doc, dict):
        raise SchemaError("%s: page file must be a JSON object" % path)

    keys = []
    for key in doc:
        if not key.isdigit():
            raise SchemaError("%s: record key %r is not a decimal index" % (path, key))
        keys.append(key)
    if len(keys) > PAGE_RECORD_CAP:
        raise SchemaError(
            "%s: page exceeds %d records (%d)" % (path, PAGE_RECORD_CAP, len(keys))
        )
    keys.sort(key=int)

    records = [record_from_json(k, doc[k], path=path, stopwords=stopwords) for k in keys]
    collected_at = max((r.time_ms for r in records), default=0)
    return FeedPage(page_index=page_index, records=records, collected_at=collected_at)


def load_pages(paths, stopwords=None):
    """Load page files in the given order; record order inside a page follows
    the numeric order of its record keys."""
    pages = []
    for i, path in enumerate(paths, start=1):
        p = Path(path)
        try:
            text = p.read_text("utf-8")
        except OSError as exc:
            raise ParseError("%s: cannot read page file: %s" % (path, exc)) from exc
        pages.append(load_page_text(text, path=str(path), page_index=i, stopwords=stopwords))
    return pages


def dedup(records):
    """Drop records whose id was already seen, keeping first occurrences."""
    seen = set()
    unique = []
    for rec in records:
        if rec.id not in seen:
            seen.add(rec.id)
            unique.append(rec)
    return unique


def record_to_normalized(rec):
    """Normalized record schema used by records.json between stages."""
    return {
        "text": rec.text,
        "id": rec.id,
        "length": rec.length,
        "date_ms": rec.date_ms,
        "source": rec.source,
        "likes": rec.likes,
        "retweets": rec.retweets,
        "time_ms": rec.time_ms,
        "geo": rec.geo,
        "sentiment_hint": rec.sentiment_hint,
        "token_list": list(rec.token_list),
    }


def record_from_normalized(obj):
    return FeedRecord(
        text=obj["text"],
        id=obj["id"],
        length=obj["length"],
        date_ms=obj["date_ms"],
        source=obj["source"],
        likes=obj["likes"],
        retweets=obj["retweets"],
        time_ms=obj["time_ms"],
        geo=obj.get("geo"),
        sentiment_hint=obj.get("sentiment_hint"),
        token_list=list(obj.get("token_list", [])),
    )
