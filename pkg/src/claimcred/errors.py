"""Exception types shared across the pipeline."""


class ClaimcredError(Exception):
    """Base class for all pipeline errors."""


class ParseError(ClaimcredError):
    """Malformed input file (JSON page file, CSV dataset, lexicon, registry)."""


class SchemaError(ClaimcredError):
    """Structurally valid file whose content violates the record schema."""


class DomainError(ClaimcredError, ValueError):
    """A value lies outside its documented domain."""


class UnratedPageError(ClaimcredError):
    """Fact-check page with no claim or no rating section; dropped downstream."""


class UnknownRatingError(ClaimcredError):
    """Rating slug outside the 12-label taxonomy."""

    def __init__(self, slug):
        super().__init__("unknown rating slug: %r" % (slug,))
        self.slug = slug


class RegistryError(ClaimcredError):
    """Fact-source registry references a source that is not defined."""


class CacheMissError(ClaimcredError):
    """offline_only fetch for a URL that is not in the cache."""

    def __init__(self, url):
        super().__init__("no cache entry for %s (offline mode)" % url)
        self.url = url


class UpstreamError(ClaimcredError):
    """Server answered with an error status (4xx, or 5xx after retries)."""

    def __init__(self, url, status):
        super().__init__("HTTP %d from %s" % (status, url))
        self.url = url
        self.status = status


class TransportError(ClaimcredError):
    """Network-level failure after retries. Safe to retry later."""

    def __init__(self, url, reason):
        super().__init__("transport failure for %s: %s" % (url, reason))
        self.url = url
        self.reason = reason
        self.retryable = True


class RedirectError(ClaimcredError):
    """Redirect resolution failed; carries the chain of URLs visited."""

    def __init__(self, message, chain):
        super().__init__("%s: %s" % (message, " -> ".join(chain)))
        self.chain = list(chain)


class RedirectLoopError(RedirectError):
    def __init__(self, chain):
        super().__init__("redirect loop", chain)


class HopBudgetError(RedirectError):
    def __init__(self, chain, max_hops):
        super().__init__("redirect hop budget of %d exhausted" % max_hops, chain)
        self.max_hops = max_hops


class AlignmentError(ClaimcredError):
    """Index-aligned assembly inputs disagree."""

    def __init__(self, index, message):
        super().__init__("alignment error at index %d: %s" % (index, message))
        self.index = index


class ConfigError(ClaimcredError):
    """Invalid pipeline configuration."""


class StageError(ClaimcredError):
    """A pipeline stage failed; carries the 1-indexed stage number."""

    def __init__(self, stage_name, stage_index, cause):
        super().__init__("stage %s failed: %s" % (stage_name, cause))
        self.stage_name = stage_name
        self.stage_index = stage_index
        self.cause = cause
