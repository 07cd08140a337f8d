"""Polite, cached HTTP fetching: per-host rate limit, retries, offline replay."""

from __future__ import annotations

import base64
import hashlib
import json
import logging
import os
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import urlparse

import requests

from . import extract
from .errors import (
    CacheMissError,
    HopBudgetError,
    RedirectLoopError,
    TransportError,
    UpstreamError,
)

logger = logging.getLogger(__name__)

DEFAULT_USER_AGENT = "claimcred/0.1 (offline-first fact-check pipeline)"

# Headers worth replaying offline; everything else is dropped at cache time.
_KEPT_HEADERS = ("location", "content-type")


@dataclass
class CrawlPolicy:
    min_interval_ms_per_host: int = 1000
    max_retries: int = 3
    retry_backoff_ms: int = 250
    max_parallel: int = 4
    cache_dir: str | Path = "crawl-cache"
    offline_only: bool = False
    user_agent: str = DEFAULT_USER_AGENT
    timeout_s: float = 30.0


@dataclass
class CrawlResult:
    requested_url: str
    final_url: str
    status: int
    body: bytes
    fetched_at: int
    from_cache: bool
    headers: dict[str, str] = field(default_factory=dict)


@dataclass
class FetchOutcome:
    """One fetch_all entry: either a result or the error that replaced it."""

    url: str
    result: CrawlResult | None = None
    error: Exception | None = None

    @property
    def ok(self):
        return self.error is None


class HttpCache:
    """URL-keyed response store. One JSON file per exact URL string.

    Layout: <dir>/<sha256[:2]>/<sha256>.json with status, kept headers,
    base64 body and the original fetch time. Writes are atomic
    (temp file + rename) so concurrent fetchers never see torn entries.
    """

    def __init__(self, cache_dir):
        self.dir = Path(cache_dir)

    def path_for(self, url):
        digest = hashlib.sha256(url.encode("utf-8")).hexdigest()
        return self.dir / digest[:2] / (digest + ".json")

    def read(self, url):
        path = self.path_for(url)
        try:
            doc = json.loads(path.read_text("utf-8"))
        except FileNotFoundError:
            return None
        return CrawlResult(
            requested_url=url,
            final_url=url,
            status=doc["status"],
            body=base64.b64decode(doc["body_b64"]),
            fetched_at=doc["fetched_at"],
            from_cache=True,
            headers=dict(doc.get("headers", {})),
        )

    def write(self, result):
        path = self.path_for(result.requested_url)
        path.parent.mkdir(parents=True, exist_ok=True)
        doc = {
            "url": result.requested_url,
            "status": result.status,
            "headers": {k: v for k, v in result.headers.items() if k in _KEPT_HEADERS},
            "fetched_at": result.fetched_at,
            "body_b64": base64.b64encode(result.body).decode("ascii"),
        }
        tmp = path.parent / (path.name + ".tmp-" + uuid.uuid4().hex)
        tmp.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", "utf-8")
        os.replace(tmp, path)


class RateLimiter:
    """Per-host minimum spacing between requests.

    Each caller reserves the next slot under the lock, then sleeps to it, so
    spacing holds under concurrency. A small pad absorbs scheduling jitter,
    keeping gaps observed by the server at or above the configured minimum.
    """

    PAD_FRACTION = 0.10
    PAD_MIN_S = 0.005

    def __init__(self):
        self._lock = threading.Lock()
        self._next_allowed = {}

    def wait(self, host, interval_ms):
        if interval_ms <= 0:
            return
        interval = interval_ms / 1000.0
        spacing = interval + max(interval * self.PAD_FRACTION, self.PAD_MIN_S)
        with self._lock:
            now = time.monotonic()
            slot = max(now, self._next_allowed.get(host, 0.0))
            self._next_allowed[host] = slot + spacing
        delay = slot - now
        if delay > 0:
            time.sleep(delay)


class Crawler:
    """Fetcher that honors a CrawlPolicy; cache first, then network."""

    def __init__(self, policy):
        self.policy = policy
        self.cache = HttpCache(policy.cache_dir)
        self.limiter = RateLimiter()

    # -- single request, no redirect following -------------------------------

    def fetch_once(self, url):
        """GET one URL. Cached entry wins; otherwise rate-limited + retried.

        Only 2xx/3xx responses are cached and returned; 4xx raises
        immediately, 5xx and transport failures raise after retries.
        """
        cached = self.cache.read(url)
        if cached is not None:
            return cached
        if self.policy.offline_only:
            raise CacheMissError(url)

        host = urlparse(url).netloc.lower()
        attempts = self.policy.max_retries + 1
        last_failure = None
        for attempt in range(attempts):
            if attempt > 0:
                backoff = self.policy.retry_backoff_ms * (2 ** (attempt - 1)) / 1000.0
                if backoff > 0:
                    time.sleep(backoff)
            self.limiter.wait(host, self.policy.min_interval_ms_per_host)
            try:
                resp = requests.get(
                    url,
                    allow_redirects=False,
                    timeout=self.policy.timeout_s,
                    headers={"User-Agent": self.policy.user_agent},
                )
            except requests.RequestException as exc:
                last_failure = TransportError(url, str(exc))
                logger.debug("transport failure (attempt %d) for %s: %s", attempt + 1, url, exc)
                continue
            if resp.status_code >= 500:
                last_failure = UpstreamError(url, resp.status_code)
                logger.debug("HTTP %d (attempt %d) for %s", resp.status_code, attempt + 1, url)
                continue
            if resp.status_code >= 400:
                raise UpstreamError(url, resp.status_code)
            result = CrawlResult(
                requested_url=url,
                final_url=url,
                status=resp.status_code,
                body=resp.content,
                fetched_at=int(time.time() * 1000),
                from_cache=False,
                headers={k.lower(): v for k, v in resp.headers.items()},
            )
            self.cache.write(result)
            return result
        raise last_failure

    # -- redirect walking -----------------------------------------------------

    def follow(self, url, max_hops=extract.DEFAULT_MAX_HOPS):
        """Hop through 3xx responses; returns the list of per-hop results.

        At most max_hops redirects are followed (max_hops + 1 requests). A
        revisited URL raises RedirectLoopError, an still-redirecting response
        after the budget raises HopBudgetError; both carry the URL chain.
        """
        chain = [url]
        seen = {url}
        current = url
        hops = []
        for _ in range(max_hops + 1):
            result = self.fetch_once(current)
            hops.append(result)
            nxt = extract.follow_location(current, result.status, result.headers)
            if nxt is None:
                return hops
            if nxt in seen:
                chain.append(nxt)
                raise RedirectLoopError(chain)
            seen.add(nxt)
            chain.append(nxt)
            current = nxt
        raise HopBudgetError(chain, max_hops)

    def fetch(self, url, max_hops=extract.DEFAULT_MAX_HOPS):
        """GET with redirect following; result body/status come from the
        terminal hop, final_url records where the walk ended."""
        hops = self.follow(url, max_hops=max_hops)
        last = hops[-1]
        return CrawlResult(
            requested_url=url,
            final_url=last.requested_url,
            status=last.status,
            body=last.body,
            fetched_at=last.fetched_at,
            from_cache=all(h.from_cache for h in hops),
            headers=last.headers,
        )

    def fetch_all(self, urls, max_hops=extract.DEFAULT_MAX_HOPS):
        """Fetch a batch with bounded parallelism.

        Output aligns index-wise with the input; per-entry failures are
        recorded, never raised, so one bad URL cannot abort the batch.
        """
        if not urls:
            return []

        def one(url):
            try:
                return FetchOutcome(url=url, result=self.fetch(url, max_hops=max_hops))
            except Exception as exc:
                logger.debug("fetch failed for %s: %s", url, exc)
                return FetchOutcome(url=url, error=exc)

        workers = max(1, min(self.policy.max_parallel, len(urls)))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, urls))


def fetch(url, policy, max_hops=extract.DEFAULT_MAX_HOPS):
    return Crawler(policy).fetch(url, max_hops=max_hops)


def fetch_all(urls, policy, max_hops=extract.DEFAULT_MAX_HOPS):
    return Crawler(policy).fetch_all(urls, max_hops=max_hops)
