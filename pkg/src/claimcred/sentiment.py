"""Lexicon-based sentiment scoring: averaged token polarities in [-1, 1]."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from . import extract, ingest
from .errors import DomainError, ParseError

DEFAULT_NEGATORS = frozenset({"not", "no", "never"})
DEFAULT_NEGATION_WINDOW = 3


class Polarity(enum.Enum):
    POSITIVE = "Positive"
    NEUTRAL = "Neutral"
    NEGATIVE = "Negative"


@dataclass
class SentimentScore:
    value: float
    polarity: Polarity


@dataclass
class Lexicon:
    """Word polarities in [-1, 1] plus a negation rule.

    A matched token preceded by a negator within ``negation_window`` tokens
    contributes its polarity flipped.
    """

    entries: dict[str, float] = field(default_factory=dict)
    negators: frozenset[str] = DEFAULT_NEGATORS
    negation_window: int = DEFAULT_NEGATION_WINDOW

    def __post_init__(self):
        for word, value in self.entries.items():
            if not -1.0 <= value <= 1.0:
                raise DomainError("lexicon entry %r has polarity %r outside [-1, 1]" % (word, value))
        if self.negation_window < 0:
            raise DomainError("negation_window must be >= 0")


def classify(value):
    """Sign convention: > 0 positive, = 0 neutral, < 0 negative."""
    if not -1.0 <= value <= 1.0:
        raise DomainError("sentiment value %r outside [-1, 1]" % value)
    if value > 0:
        return Polarity.POSITIVE
    if value < 0:
        return Polarity.NEGATIVE
    return Polarity.NEUTRAL


def tokenize_for_scoring(text):
    """Scoring tokens: URLs removed, punctuation-split, lower-cased."""
    return [w.lower() for w in ingest.split_words(extract.strip_urls(text))]


def score(text, lexicon=None):
    """Average the polarities of lexicon-matched tokens; 0 when none match."""
    if lexicon is None:
        lexicon = default_lexicon()
    tokens = tokenize_for_scoring(text)
    contributions = []
    window = lexicon.negation_window
    for i, token in enumerate(tokens):
        polarity = lexicon.entries.get(token)
        if polarity is None:
            continue
        negated = window > 0 and any(
            tokens[j] in lexicon.negators for j in range(max(0, i - window), i)
        )
        contributions.append(-polarity if negated else polarity)
    if not contributions:
        value = 0.0
    else:
        # fsum: correctly rounded regardless of token order, so reordering a
        # text never changes the score and negating the lexicon negates it.
        value = math.fsum(contributions) / len(contributions)
        value = max(-1.0, min(1.0, value))
    return SentimentScore(value=value, polarity=classify(value))


def load_lexicon_text(text, path="<memory>", negators=DEFAULT_NEGATORS,
                      negation_window=DEFAULT_NEGATION_WINDOW):
    """Parse "word<TAB>polarity" lines; '#' starts a comment line."""
    entries = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError("%s:%d: expected word<TAB>polarity" % (path, lineno))
        word = parts[0].strip().lower()
        try:
            value = float(parts[1])
        except ValueError:
            raise ParseError("%s:%d: polarity %r is not a number" % (path, lineno, parts[1])) from None
        if not -1.0 <= value <= 1.0:
            raise ParseError("%s:%d: polarity %r outside [-1, 1]" % (path, lineno, parts[1]))
        entries[word] = value
    return Lexicon(entries=entries, negators=negators, negation_window=negation_window)


def load_lexicon(path):
    with open(path, encoding="utf-8") as f:
        return load_lexicon_text(f.read(), path=str(path))


@lru_cache(maxsize=1)
def default_lexicon():
    text = resources.files("claimcred.data").joinpath("lexicon.tsv").read_text("utf-8")
    return load_lexicon_text(text, path="claimcred/data/lexicon.tsv")
