"""Command-line interface: per-stage subcommands plus an end-to-end `run`.

Exit codes: 0 success, 2 configuration error, 3+N failure at pipeline
stage N (1-indexed: ingest=1 .. analyze=7).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import analysis, extract, pipeline, sentiment
from .config import env_overrides, load_config_file, resolve_config
from .crawler import Crawler, CrawlPolicy
from .errors import ClaimcredError, ConfigError, StageError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STAGE_BASE = 3


def _setup_logging(verbose):
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("level=%(levelname)s %(message)s"))
    root = logging.getLogger("claimcred")
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.INFO)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="claimcred",
        description="Harvest fact-checked claims and compare sentiment with credibility.",
    )
    parser.add_argument("--config", help="key=value configuration file")
    parser.add_argument("--output-dir", help="directory for pipeline artifacts")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load feed page files into records.json")
    p.add_argument("--pages", required=True, help="glob of JSON page files")
    p.add_argument("--out", required=True)

    p = sub.add_parser("extract", help="extract URLs from records, resolve shorteners")
    p.add_argument("--records", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-resolve", action="store_true")
    p.add_argument("--cache", help="crawl cache directory")
    p.add_argument("--offline", action="store_true")
    p.add_argument("--rate-ms", type=int)
    p.add_argument("--parallel", type=int)
    p.add_argument("--max-hops", type=int, default=extract.DEFAULT_MAX_HOPS)

    p = sub.add_parser("crawl", help="fetch fact-check pages")
    p.add_argument("--urls", required=True)
    p.add_argument("--cache", help="crawl cache directory")
    p.add_argument("--offline", action="store_true")
    p.add_argument("--rate-ms", type=int)
    p.add_argument("--parallel", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("parse", help="extract claim/rating/origin sections")
    p.add_argument("--crawl", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--warnings")

    p = sub.add_parser("score", help="score claim sentiment")
    p.add_argument("--parsed", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--out", required=True)

    p = sub.add_parser("assemble", help="build the dataset CSV")
    p.add_argument("--parsed", required=True)
    p.add_argument("--scored", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--json")

    p = sub.add_parser("analyze", help="compute statistics and violin plots")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--violin")
    p.add_argument("--svg")
    p.add_argument("--lo", type=float, default=analysis.DEFAULT_TAIL_LO)
    p.add_argument("--hi", type=float, default=analysis.DEFAULT_TAIL_HI)
    p.add_argument("--grid", type=int, default=analysis.DEFAULT_GRID_POINTS)

    p = sub.add_parser("run", help="run the whole pipeline")
    p.add_argument("--pages", help="glob of JSON page files")
    p.add_argument("--cache", help="crawl cache directory")
    p.add_argument("--offline", action="store_true", default=None)
    p.add_argument("--rate-ms", type=int)
    p.add_argument("--parallel", type=int)
    p.add_argument("--lexicon")
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)

    return parser


def _config_from_args(args):
    file_values = load_config_file(args.config) if args.config else {}
    flags = {
        "pages_glob": getattr(args, "pages", None),
        "cache_dir": getattr(args, "cache", None),
        "offline": getattr(args, "offline", None),
        "rate_ms": getattr(args, "rate_ms", None),
        "parallel": getattr(args, "parallel", None),
        "lexicon_path": getattr(args, "lexicon", None),
        "lo": getattr(args, "lo", None),
        "hi": getattr(args, "hi", None),
        "output_dir": args.output_dir,
    }
    return resolve_config(file_values, env_overrides(), flags)


def _crawler_from_args(args):
    config = _config_from_args(args)
    return Crawler(
        CrawlPolicy(
            min_interval_ms_per_host=config.rate_ms,
            max_parallel=config.parallel,
            cache_dir=config.cache_dir,
            offline_only=config.offline,
        )
    )


def main(argv=None):
    args = _build_parser().parse_args(argv)
    _setup_logging(args.verbose)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except StageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_STAGE_BASE + exc.stage_index


def _stage_guard(name, fn):
    """Run one stage subcommand, mapping failures to its stage exit code."""
    try:
        return fn()
    except ConfigError:
        raise
    except StageError:
        raise
    except ClaimcredError as exc:
        raise StageError(name, pipeline.stage_index(name), exc) from exc
    except OSError as exc:
        raise StageError(name, pipeline.stage_index(name), exc) from exc


def _dispatch(args):
    cmd = args.command
    if cmd == "ingest":
        _stage_guard(cmd, lambda: pipeline.stage_ingest(args.pages, args.out))
        return EXIT_OK
    if cmd == "extract":
        crawler = None if args.no_resolve else _crawler_from_args(args)
        _stage_guard(
            cmd,
            lambda: pipeline.stage_extract(
                args.records, args.out, crawler=crawler,
                resolve=not args.no_resolve, max_hops=args.max_hops,
            ),
        )
        return EXIT_OK
    if cmd == "crawl":
        crawler = _crawler_from_args(args)
        def crawl_fn():
            counts = pipeline.stage_crawl(args.urls, args.out, crawler)
            if crawler.policy.offline_only and counts["cache_misses"]:
                raise ClaimcredError("%d URL(s) not in cache" % counts["cache_misses"])
            return counts
        _stage_guard(cmd, crawl_fn)
        return EXIT_OK
    if cmd == "parse":
        _stage_guard(cmd, lambda: pipeline.stage_parse(args.crawl, args.out,
                                                       warnings_path=args.warnings))
        return EXIT_OK
    if cmd == "score":
        lexicon = sentiment.load_lexicon(args.lexicon) if args.lexicon else None
        _stage_guard(cmd, lambda: pipeline.stage_score(args.parsed, args.out, lexicon))
        return EXIT_OK
    if cmd == "assemble":
        _stage_guard(cmd, lambda: pipeline.stage_assemble(args.parsed, args.scored,
                                                          args.out, json_path=args.json))
        return EXIT_OK
    if cmd == "analyze":
        _stage_guard(
            cmd,
            lambda: pipeline.stage_analyze(
                args.dataset, args.out, violin_path=args.violin, svg_path=args.svg,
                lo=args.lo, hi=args.hi, grid_points=args.grid,
            ),
        )
        return EXIT_OK
    if cmd == "run":
        config = _config_from_args(args)
        report = pipeline.run(config)
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
        return EXIT_OK
    raise ConfigError("unknown command %r" % cmd)


if __name__ == "__main__":
    sys.exit(main())
