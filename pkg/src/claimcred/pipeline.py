"""Stage functions and the end-to-end runner.

Every stage reads and writes plain JSON/CSV artifacts, so each one is
independently runnable from the CLI and the artifacts double as the
stage contracts.
"""

from __future__ import annotations

import base64
import glob
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from . import analysis, dataset, extract, ingest, page_parse, sentiment
from .crawler import Crawler, CrawlPolicy
from .errors import (
    CacheMissError,
    ClaimcredError,
    StageError,
    UnknownRatingError,
    UnratedPageError,
)
from .ratings import parse_rating
from .sentiment import Polarity, SentimentScore

logger = logging.getLogger("claimcred")

STAGES = ("ingest", "extract", "crawl", "parse", "score", "assemble", "analyze")


def stage_index(name):
    return STAGES.index(name) + 1


def log_event(stage, message, level=logging.INFO):
    logger.log(level, 'stage=%s msg="%s"', stage, message)


def write_json(path, obj):
    text = json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True)
    Path(path).write_text(text + "\n", "utf-8")


def read_json(path):
    return json.loads(Path(path).read_text("utf-8"))


# -- stages -------------------------------------------------------------------


def stage_ingest(pages_glob, out_path):
    paths = sorted(glob.glob(pages_glob))
    pages = ingest.load_pages(paths)
    loaded = [rec for page in pages for rec in page.records]
    records = ingest.dedup(loaded)
    write_json(out_path, [ingest.record_to_normalized(r) for r in records])
    counts = {
        "pages": len(pages),
        "records_loaded": len(loaded),
        "records": len(records),
        "duplicates_removed": len(loaded) - len(records),
    }
    log_event("ingest", "loaded %(records_loaded)d records from %(pages)d pages, "
              "%(records)d after dedup" % counts)
    return counts


def stage_extract(records_path, out_path, crawler=None, resolve=True,
                  max_hops=extract.DEFAULT_MAX_HOPS):
    records = [ingest.record_from_normalized(o) for o in read_json(records_path)]
    entries = []
    resolved_count = 0
    errors = 0
    for rec in records:
        for eu in extract.extract_urls(rec.text, source_record_id=rec.id):
            error = None
            if resolve and eu.crawlable and crawler is not None:
                try:
                    eu.resolved = extract.resolve_redirects(
                        eu.raw, max_hops=max_hops, crawler=crawler
                    )
                    resolved_count += 1
                except ClaimcredError as exc:
                    errors += 1
                    error = str(exc)
                    log_event("extract", "resolution failed for %s: %s" % (eu.raw, exc),
                              logging.WARNING)
            entries.append(
                {
                    "raw": eu.raw,
                    "scheme": eu.scheme,
                    "host": eu.host,
                    "resolved": eu.resolved,
                    "source_record_id": eu.source_record_id,
                    "error": error,
                }
            )
    write_json(out_path, entries)
    counts = {
        "records": len(records),
        "urls_found": len(entries),
        "urls_resolved": resolved_count,
        "resolve_errors": errors,
    }
    log_event("extract", "%(urls_found)d URLs in %(records)d records, "
              "%(urls_resolved)d resolved" % counts)
    return counts


def stage_crawl(urls_path, out_path, crawler, max_hops=extract.DEFAULT_MAX_HOPS):
    entries = read_json(urls_path)
    targets = []
    skipped = 0
    for entry in entries:
        if entry["scheme"] in extract.CRAWLABLE_SCHEMES:
            targets.append((entry["resolved"] or entry["raw"], entry["source_record_id"]))
        else:
            skipped += 1
    outcomes = crawler.fetch_all([t[0] for t in targets], max_hops=max_hops)
    out = []
    fetched = 0
    cached = 0
    errors = 0
    cache_misses = 0
    for (url, record_id), outcome in zip(targets, outcomes):
        if outcome.ok:
            r = outcome.result
            fetched += 1
            if r.from_cache:
                cached += 1
            out.append(
                {
                    "requested_url": r.requested_url,
                    "final_url": r.final_url,
                    "status": r.status,
                    "body_b64": base64.b64encode(r.body).decode("ascii"),
                    "fetched_at": r.fetched_at,
                    "from_cache": r.from_cache,
                    "source_record_id": record_id,
                    "error": None,
                }
            )
        else:
            errors += 1
            if isinstance(outcome.error, CacheMissError):
                cache_misses += 1
            out.append(
                {
                    "requested_url": url,
                    "source_record_id": record_id,
                    "error": {
                        "kind": type(outcome.error).__name__,
                        "message": str(outcome.error),
                    },
                }
            )
    write_json(out_path, out)
    counts = {
        "targets": len(targets),
        "fetched": fetched,
        "from_cache": cached,
        "errors": errors,
        "cache_misses": cache_misses,
        "skipped_non_crawlable": skipped,
    }
    log_event("crawl", "%(fetched)d/%(targets)d pages fetched "
              "(%(from_cache)d cached, %(errors)d errors)" % counts)
    return counts


def stage_parse(crawl_path, out_path, warnings_path=None):
    entries = read_json(crawl_path)
    out = []
    all_warnings = []
    parsed_ok = 0
    unrated = 0
    fetch_failed = 0
    for entry in entries:
        record_id = entry["source_record_id"]
        if entry.get("error"):
            fetch_failed += 1
            out.append(
                {
                    "source_url": entry["requested_url"],
                    "record_id": record_id,
                    "page": None,
                    "error": "fetch-failed",
                    "warnings": [],
                }
            )
            continue
        body = base64.b64decode(entry["body_b64"])
        url = entry["final_url"]
        try:
            page, warnings = page_parse.parse_page_with_warnings(body, url)
        except UnratedPageError as exc:
            unrated += 1
            out.append(
                {
                    "source_url": url,
                    "record_id": record_id,
                    "page": None,
                    "error": "unrated-page",
                    "warnings": [str(exc)],
                }
            )
            continue
        parsed_ok += 1
        all_warnings.extend(warnings)
        out.append(
            {
                "source_url": url,
                "record_id": record_id,
                "page": {
                    "claim_html": page.claim_html,
                    "rating_html": page.rating_html,
                    "origin_html": page.origin_html,
                    "claim_text": page.claim_text,
                    "rating_label": page.rating_label,
                    "origin_text": page.origin_text,
                    "source_url": page.source_url,
                },
                "error": None,
                "warnings": warnings,
            }
        )
    write_json(out_path, out)
    if warnings_path is not None:
        Path(warnings_path).write_text(
            "".join(w + "\n" for w in all_warnings), "utf-8"
        )
    counts = {
        "entries": len(entries),
        "parsed": parsed_ok,
        "unrated": unrated,
        "fetch_failed": fetch_failed,
        "warnings": len(all_warnings),
    }
    log_event("parse", "%(parsed)d/%(entries)d pages parsed, "
              "%(unrated)d unrated" % counts)
    return counts


def stage_score(parsed_path, out_path, lexicon=None):
    entries = read_json(parsed_path)
    out = []
    scored = 0
    for entry in entries:
        page = entry.get("page")
        if page is None:
            out.append(None)
            continue
        s = sentiment.score(page["claim_text"], lexicon)
        scored += 1
        out.append(
            {
                "record_id": entry["record_id"],
                "value": s.value,
                "polarity": s.polarity.value,
            }
        )
    write_json(out_path, out)
    counts = {"entries": len(entries), "scored": scored}
    log_event("score", "%(scored)d/%(entries)d claims scored" % counts)
    return counts


def _parsed_page_from_json(obj):
    return page_parse.ParsedPage(
        claim_html=obj["claim_html"],
        rating_html=obj["rating_html"],
        origin_html=obj["origin_html"],
        claim_text=obj["claim_text"],
        rating_label=obj["rating_label"],
        origin_text=obj["origin_text"],
        source_url=obj["source_url"],
    )


def stage_assemble(parsed_path, scored_path, csv_path, json_path=None):
    parsed_entries = read_json(parsed_path)
    scored_entries = read_json(scored_path)

    pages = []
    scores = []
    rating_list = []
    record_ids = []
    unknown_rating = 0
    for entry, score_obj in zip(parsed_entries, scored_entries):
        record_ids.append(entry["record_id"])
        page_obj = entry.get("page")
        if page_obj is None:
            pages.append(None)
            scores.append(None)
            rating_list.append(None)
            continue
        pages.append(_parsed_page_from_json(page_obj))
        scores.append(
            SentimentScore(value=score_obj["value"], polarity=Polarity(score_obj["polarity"]))
        )
        try:
            rating_list.append(parse_rating(page_obj["rating_label"]))
        except UnknownRatingError as exc:
            unknown_rating += 1
            rating_list.append(None)
            log_event("assemble", "unknown rating %r dropped" % exc.slug, logging.WARNING)

    result = dataset.assemble(pages, scores, rating_list, record_ids=record_ids)
    dataset.write_csv(result.rows, csv_path)
    if json_path is not None:
        write_json(json_path, [dataset.row_to_json(r) for r in result.rows])
    counts = {
        "input": len(parsed_entries),
        "rows_emitted": len(result.rows),
        "dropped_unrated": result.dropped_unrated - unknown_rating,
        "dropped_unknown_rating": unknown_rating,
        "dropped_duplicate": result.dropped_duplicate,
        "rows_dropped": result.dropped,
    }
    log_event("assemble", "%(rows_emitted)d rows, %(rows_dropped)d dropped" % counts)
    return counts


def stage_analyze(dataset_path, stats_path, violin_path=None, svg_path=None,
                  lo=analysis.DEFAULT_TAIL_LO, hi=analysis.DEFAULT_TAIL_HI,
                  grid_points=analysis.DEFAULT_GRID_POINTS):
    rows = dataset.read_csv(dataset_path)
    report = analysis.stats_report(rows, lo=lo, hi=hi)
    write_json(stats_path, report)
    by_rating = analysis.violin(rows, analysis.GROUP_BY_RATING, grid_points)
    by_cluster = analysis.violin(rows, analysis.GROUP_BY_CLUSTER, grid_points)
    if violin_path is not None:
        write_json(
            violin_path,
            {
                "by_rating": [analysis.violin_to_json(v) for v in by_rating],
                "by_cluster": [analysis.violin_to_json(v) for v in by_cluster],
            },
        )
    if svg_path is not None:
        Path(svg_path).write_text(
            analysis.render_violin_svg(list(by_rating) + list(by_cluster)), "utf-8"
        )
    counts = {
        "rows": len(rows),
        "total_false": report["contingency"]["total_false"],
        "total_true": report["contingency"]["total_true"],
        "below_tail": report["tails"]["below_count"],
        "above_tail": report["tails"]["above_count"],
    }
    log_event("analyze", "%(rows)d rows analyzed" % counts)
    return counts


# -- end-to-end run -----------------------------------------------------------


@dataclass
class PipelineReport:
    success: bool = False
    failed_stage: str | None = None
    records_loaded: int = 0
    records: int = 0
    urls_found: int = 0
    urls_resolved: int = 0
    pages_fetched: int = 0
    pages_from_cache: int = 0
    pages_parsed: int = 0
    rows_emitted: int = 0
    rows_dropped: int = 0
    stage_counts: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "success": self.success,
            "failed_stage": self.failed_stage,
            "records_loaded": self.records_loaded,
            "records": self.records,
            "urls_found": self.urls_found,
            "urls_resolved": self.urls_resolved,
            "pages_fetched": self.pages_fetched,
            "pages_from_cache": self.pages_from_cache,
            "pages_parsed": self.pages_parsed,
            "rows_emitted": self.rows_emitted,
            "rows_dropped": self.rows_dropped,
            "stage_counts": self.stage_counts,
        }


def policy_from_config(config):
    return CrawlPolicy(
        min_interval_ms_per_host=config.rate_ms,
        max_parallel=config.parallel,
        cache_dir=config.cache_dir,
        offline_only=config.offline,
    )


def run(config):
    """Execute ingest -> extract -> crawl -> parse -> score -> assemble ->
    analyze, leaving every intermediate artifact in the output directory.

    Raises StageError (with the failing 1-indexed stage) on the first fatal
    problem; earlier stages' outputs stay on disk.
    """
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    crawler = Crawler(policy_from_config(config))
    lexicon = (
        sentiment.load_lexicon(config.lexicon_path)
        if config.lexicon_path
        else sentiment.default_lexicon()
    )
    report = PipelineReport()

    def attempt(name, fn):
        try:
            counts = fn()
        except StageError:
            raise
        except Exception as exc:
            raise StageError(name, stage_index(name), exc) from exc
        report.stage_counts[name] = counts
        return counts

    c = attempt("ingest", lambda: stage_ingest(config.pages_glob, out / "records.json"))
    report.records_loaded = c["records_loaded"]
    report.records = c["records"]

    c = attempt("extract", lambda: stage_extract(out / "records.json", out / "urls.json",
                                                 crawler=crawler))
    report.urls_found = c["urls_found"]
    report.urls_resolved = c["urls_resolved"]

    def crawl_fn():
        counts = stage_crawl(out / "urls.json", out / "crawl.json", crawler)
        if config.offline and counts["cache_misses"]:
            raise StageError(
                "crawl",
                stage_index("crawl"),
                CacheMissError("%d URL(s) not in cache" % counts["cache_misses"]),
            )
        return counts

    c = attempt("crawl", crawl_fn)
    report.pages_fetched = c["fetched"]
    report.pages_from_cache = c["from_cache"]

    c = attempt("parse", lambda: stage_parse(out / "crawl.json", out / "parsed.json",
                                             warnings_path=out / "parse-warnings.log"))
    report.pages_parsed = c["parsed"]

    attempt("score", lambda: stage_score(out / "parsed.json", out / "scored.json", lexicon))

    c = attempt("assemble", lambda: stage_assemble(out / "parsed.json", out / "scored.json",
                                                   out / "dataset.csv", out / "dataset.json"))
    report.rows_emitted = c["rows_emitted"]
    report.rows_dropped = c["rows_dropped"]

    attempt("analyze", lambda: stage_analyze(out / "dataset.csv", out / "stats.json",
                                             violin_path=out / "violin.json",
                                             svg_path=out / "plot.svg",
                                             lo=config.lo, hi=config.hi))

    report.success = True
    write_json(out / "run_report.json", report.to_json())
    return report
