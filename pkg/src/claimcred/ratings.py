"""Credibility rating taxonomy, 3-way clustering, and fact-source trust checks."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .errors import ParseError, RegistryError, UnknownRatingError

logger = logging.getLogger(__name__)


class Rating(enum.Enum):
    """The 12 credibility labels, in canonical display order."""

    TRUE = "true"
    FALSE = "false"
    MOSTLY_TRUE = "mostly-true"
    MOSTLY_FALSE = "mostly-false"
    OUTDATED = "outdated"
    MISCAPTIONED = "miscaptioned"
    MISATTRIBUTED = "misattributed"
    UNPROVEN = "unproven"
    MIXTURE = "mixture"
    LEGEND = "legend"
    SCAM = "scam"
    CORRECT_ATTRIBUTION = "correct-attribution"

    @property
    def slug(self):
        return self.value

    @property
    def display_label(self):
        return _DISPLAY_LABELS[self]


class RatingCluster(enum.Enum):
    FALSE_LIKE = "FalseLike"
    TRUE_LIKE = "TrueLike"
    OTHER = "Other"


TAXONOMY = tuple(Rating)

_DISPLAY_LABELS = {
    Rating.TRUE: "True",
    Rating.FALSE: "False",
    Rating.MOSTLY_TRUE: "Mostly True",
    Rating.MOSTLY_FALSE: "Mostly False",
    Rating.OUTDATED: "Outdated",
    Rating.MISCAPTIONED: "Miscaptioned",
    Rating.MISATTRIBUTED: "Misattributed",
    Rating.UNPROVEN: "Unproven",
    Rating.MIXTURE: "Mixture",
    Rating.LEGEND: "Legend",
    Rating.SCAM: "Scam",
    Rating.CORRECT_ATTRIBUTION: "Correct Attribution",
}

_FALSE_LIKE = frozenset(
    {Rating.FALSE, Rating.MOSTLY_FALSE, Rating.MISATTRIBUTED, Rating.MISCAPTIONED, Rating.SCAM}
)
_TRUE_LIKE = frozenset({Rating.TRUE, Rating.MOSTLY_TRUE, Rating.CORRECT_ATTRIBUTION})

# Slug -> Rating; hyphenated and fused spellings are both accepted.
_SLUGS = {r.slug: r for r in Rating}
_SLUGS["mis-captioned"] = Rating.MISCAPTIONED
_SLUGS["mis-attributed"] = Rating.MISATTRIBUTED


def parse_rating(slug):
    """Map a lower-case hyphenated slug onto a Rating.

    Raises UnknownRatingError for anything outside the 12-label taxonomy;
    callers count those records and exclude them downstream.
    """
    key = slug.strip().lower()
    try:
        return _SLUGS[key]
    except KeyError:
        raise UnknownRatingError(slug) from None


def parse_display_label(label):
    """Inverse of Rating.display_label (used when reading dataset files)."""
    key = label.strip().lower().replace(" ", "-")
    return parse_rating(key)


def cluster_of(rating):
    if rating in _FALSE_LIKE:
        return RatingCluster.FALSE_LIKE
    if rating in _TRUE_LIKE:
        return RatingCluster.TRUE_LIKE
    return RatingCluster.OTHER


class VerificationKind(enum.Enum):
    EVENT_GROUNDED = "event-grounded"
    DERIVED_FROM = "derived-from"
    UNVERIFIED = "unverified"


@dataclass
class FactSource:
    """A rating source and how its credibility is vouched for.

    A source is credible iff its derivation chain terminates in an
    event-grounded source without cycles.
    """

    name: str
    verification: VerificationKind
    derived_from: str | None = None
    reason: str = ""


@dataclass
class EventOracle:
    """Binary ground truth for test fixtures: did the claimed event occur?"""

    facts: dict[int, bool] = field(default_factory=dict)

    def occurred(self, claim_id):
        return self.facts[claim_id]


def trust_chain(source, registry):
    """Walk derived-from links; returns (credible, chain of names, cycle flag)."""
    chain = [source.name]
    visited = {source.name}
    current = source
    while True:
        if current.verification is VerificationKind.EVENT_GROUNDED:
            return True, chain, False
        if current.verification is VerificationKind.UNVERIFIED:
            return False, chain, False
        parent = current.derived_from
        if parent is None:
            return False, chain, False
        if parent not in registry:
            raise RegistryError(
                "source %r derives from unknown source %r" % (current.name, parent)
            )
        if parent in visited:
            chain.append(parent)
            logger.warning("credibility cycle: %s", " -> ".join(chain))
            return False, chain, True
        visited.add(parent)
        chain.append(parent)
        current = registry[parent]


def source_credible(source, registry):
    credible, _, _ = trust_chain(source, registry)
    return credible


def load_registry_text(text, path="<memory>"):
    """Parse a registry document: name<TAB>verification<TAB>reason lines.

    verification is "event-grounded", "unverified", or "derived-from:<name>".
    """
    registry = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(
                "%s:%d: expected name<TAB>verification<TAB>reason" % (path, lineno)
            )
        name, verification, reason = (p.strip() for p in parts)
        derived_from = None
        if verification.startswith("derived-from:"):
            derived_from = verification.split(":", 1)[1].strip()
            kind = VerificationKind.DERIVED_FROM
            if not derived_from:
                raise ParseError("%s:%d: derived-from needs a source name" % (path, lineno))
        else:
            try:
                kind = VerificationKind(verification)
            except ValueError:
                raise ParseError(
                    "%s:%d: unknown verification kind %r" % (path, lineno, verification)
                ) from None
            if kind is VerificationKind.DERIVED_FROM:
                raise ParseError("%s:%d: derived-from needs a source name" % (path, lineno))
        registry[name] = FactSource(
            name=name, verification=kind, derived_from=derived_from, reason=reason
        )
    for src in registry.values():
        if src.derived_from is not None and src.derived_from not in registry:
            raise RegistryError(
                "source %r derives from unknown source %r" % (src.name, src.derived_from)
            )
    return registry


def load_registry(path):
    with open(path, encoding="utf-8") as f:
        return load_registry_text(f.read(), path=str(path))


@lru_cache(maxsize=1)
def default_registry():
    text = resources.files("claimcred.data").joinpath("sources.tsv").read_text("utf-8")
    return load_registry_text(text, path="claimcred/data/sources.tsv")
