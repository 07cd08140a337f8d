"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they happen; without -s pytest still shows them for failures.
"""

import json
import random
import shutil
import time
from contextlib import contextmanager

import pandas as pd
import pytest

from claimcred import analysis, cli, extract, ingest, page_parse, sentiment
from claimcred.analysis import contingency, gaussian_kde_grid, quantiles_linear, stats_report
from claimcred.crawler import Crawler, CrawlPolicy, HttpCache
from claimcred.dataset import DatasetRow, read_csv, write_csv
from claimcred.errors import HopBudgetError, RedirectLoopError
from claimcred.ratings import Rating, RatingCluster, cluster_of, parse_rating
from claimcred.sentiment import Lexicon, Polarity, score

from conftest import (
    OREILLY_CLAIM,
    OREILLY_SHORT_URL,
    OREILLY_TOKENS,
    OREILLY_TWEET,
    OREILLY_URL,
)
import oracles
from synthetic import paper_composition, row

ORIGIN_PREFIX = "On 21 May 2017, the Daily USA Update web site published an article"


@contextmanager
def criterion(number, name):
    try:
        yield
    except BaseException:
        print("[criterion %02d] FAIL %s" % (number, name))
        raise
    print("[criterion %02d] PASS %s" % (number, name))


@contextmanager
def budget_ms(limit_ms):
    start = time.perf_counter()
    yield
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    assert elapsed_ms < limit_ms, "took %.2f ms, budget %s ms" % (elapsed_ms, limit_ms)


def test_c01_tokenization_golden():
    with criterion(1, "tokenization reproduces the golden 9-token list"):
        ingest.tokenize("warmup")  # load the stopword list outside the timing
        with budget_ms(1):
            tokens = ingest.tokenize(OREILLY_TWEET)
        assert tokens == OREILLY_TOKENS


def test_c02_url_extraction_golden_and_oracle():
    with criterion(2, "URL extraction matches the sample and a PCRE oracle on 200 strings"):
        with budget_ms(1000):
            urls = extract.extract_urls(OREILLY_TWEET)
            assert [u.raw for u in urls] == [
                "https://t.co/SGwagACMbW",
                "https://t.co/Ppx1FhJeMm",
            ]
            lines = oracles.url_test_strings(200, seed=2020)
            expected = oracles.pcre_match_spans(lines)
            agreements = 0
            for line, spans in zip(lines, expected):
                ours = [(m.start(), m.end()) for m in extract.URL_RE.finditer(line)]
                assert ours == spans, line
                agreements += 1
            assert agreements == 200  # 100% span agreement


def test_c03_redirect_resolution(fixture_cache_dir, server, tmp_path):
    with criterion(3, "sample short link resolves to its fact-check URL in one hop"):
        with budget_ms(1000):
            offline = Crawler(CrawlPolicy(offline_only=True, cache_dir=fixture_cache_dir))
            hops = offline.follow(OREILLY_SHORT_URL, max_hops=10)
            assert hops[-1].requested_url == OREILLY_URL
            assert len(hops) == 2  # exactly one redirect followed
            assert extract.resolve_redirects(OREILLY_SHORT_URL, crawler=offline) == OREILLY_URL

            live = Crawler(CrawlPolicy(min_interval_ms_per_host=0, max_retries=0,
                                       retry_backoff_ms=0, cache_dir=tmp_path / "cache"))
            a, b = server.url("/loopA"), server.url("/loopB")
            server.redirect("/loopA", b)
            server.redirect("/loopB", a)
            with pytest.raises(RedirectLoopError) as loop_exc:
                extract.resolve_redirects(a, max_hops=10, crawler=live)
            assert loop_exc.value.chain == [a, b, a]

            for i in range(8):
                server.redirect("/hop%d" % i, server.url("/hop%d" % (i + 1)))
            server.reset_log()
            with pytest.raises(HopBudgetError):
                extract.resolve_redirects(server.url("/hop0"), max_hops=4, crawler=live)
            assert server.request_count() <= 5  # max_hops + 1 requests


def test_c04_page_parsing_golden(fixture_cache_dir):
    with criterion(4, "fixture page parses to the golden claim, rating and origin"):
        body = HttpCache(fixture_cache_dir).read(OREILLY_URL).body
        with budget_ms(10):
            page = page_parse.parse_page(body, OREILLY_URL)
        assert page.claim_text == OREILLY_CLAIM
        assert page.rating_label == "false"
        assert page.origin_text.startswith(ORIGIN_PREFIX)


def test_c05_taxonomy_completeness():
    with criterion(5, "12 labels round-trip and cluster 5/3/4"):
        with budget_ms(1):
            for rating in Rating:
                assert parse_rating(rating.slug) is rating
            sizes = {c: 0 for c in RatingCluster}
            for rating in Rating:
                sizes[cluster_of(rating)] += 1
        assert len(Rating) == 12
        assert sizes[RatingCluster.FALSE_LIKE] == 5
        assert sizes[RatingCluster.TRUE_LIKE] == 3
        assert sizes[RatingCluster.OTHER] == 4


def test_c06_contingency_reproduction():
    with criterion(6, "reference composition yields 38.18% / 38.13% negative shares"):
        rows = paper_composition()
        with budget_ms(10):
            stats = contingency(rows)
        assert (stats.total_false, stats.total_true) == (495, 160)
        assert (stats.false_nonneg, stats.false_neg) == (306, 189)
        assert (stats.true_nonneg, stats.true_neg) == (99, 61)
        assert abs(stats.pct_false_neg - 38.18) <= 0.01
        assert abs(stats.pct_true_neg - 38.13) <= 0.01


def test_c07_tail_extremes():
    with criterion(7, "tail extremes find 4 below / 5 above with an all-FalseLike low tail"):
        rows = paper_composition(extremes=True)
        with budget_ms(10):
            below, above = analysis.tail_extremes(rows, -0.6, 0.6)
            report = stats_report(rows, -0.6, 0.6)
        assert len(below) == 4
        assert len(above) == 5
        assert all(cluster_of(r.rating) is RatingCluster.FALSE_LIKE for r in below)
        assert report["tails"]["below_all_false_like"] is True
        above_clusters = {cluster_of(r.rating) for r in above}
        assert above_clusters == {RatingCluster.FALSE_LIKE, RatingCluster.TRUE_LIKE}


def test_c08_sentiment_contract():
    with criterion(8, "sentiment property suite and golden-example sign"):
        with budget_ms(5000):
            rng = random.Random(814)
            vocab = ["alpha", "bravo", "charlie", "delta", "echo", "foxtrot",
                     "golf", "hotel", "india", "juliet"]

            def random_lexicon():
                words = rng.sample(vocab, rng.randint(1, 6))
                return Lexicon(
                    entries={w: rng.uniform(-1, 1) for w in words},
                    negators=frozenset(),
                    negation_window=0,
                )

            def random_text(extra_vocab=()):
                pool = vocab + list(extra_vocab) + ["zulu", "yankee", "xray"]
                return " ".join(rng.choice(pool) for _ in range(rng.randint(0, 15)))

            for _ in range(1000):  # range containment
                value = score(random_text(), random_lexicon()).value
                assert -1.0 <= value <= 1.0

            empty_lexicon = Lexicon(entries={"unmatchable": 0.9})
            for _ in range(1000):  # zero when nothing matches
                result = score(random_text(), empty_lexicon)
                assert result.value == 0.0 and result.polarity is Polarity.NEUTRAL

            for _ in range(1000):  # exact antisymmetry under lexicon negation
                lex = random_lexicon()
                text = random_text()
                flipped = Lexicon(entries={w: -p for w, p in lex.entries.items()},
                                  negators=lex.negators, negation_window=0)
                assert score(text, flipped).value == -score(text, lex).value

            for _ in range(1000):  # permutation invariance without negators
                lex = random_lexicon()
                words = [rng.choice(vocab) for _ in range(rng.randint(0, 12))]
                shuffled = words[:]
                rng.shuffle(shuffled)
                assert score(" ".join(words), lex).value == score(" ".join(shuffled), lex).value

            golden = score(OREILLY_CLAIM)  # shipped lexicon
            assert golden.polarity is Polarity.NEGATIVE
            assert golden.value < 0  # agrees in sign with the golden value -0.0833


def test_c09_quantile_kde_oracle():
    with criterion(9, "quantiles match a brute-force oracle; densities integrate to 1"):
        with budget_ms(30000):
            rng = random.Random(4096)
            for _ in range(1000):
                n = rng.randint(1, 200)
                values = [rng.uniform(-1, 1) for _ in range(n)]
                q1, med, q3 = quantiles_linear(values)
                o1, omed, o3 = oracles.quartiles_oracle(values)
                assert abs(q1 - o1) <= 1e-12
                assert abs(med - omed) <= 1e-12
                assert abs(q3 - o3) <= 1e-12
                grid = gaussian_kde_grid(values, 256)
                xs = [x for x, _ in grid]
                ds = [d for _, d in grid]
                assert all(d >= 0.0 for d in ds)
                assert abs(oracles.trapezoid_oracle(xs, ds) - 1.0) <= 0.01


def test_c10_csv_round_trip(tmp_path):
    with criterion(10, "CSV write/read is identity on 1,000 generated row sets"):
        with budget_ms(30000):
            rng = random.Random(1977)
            fragments = ['plain', 'with, comma', 'quo"te', 'new\nline', 'cr\rlf',
                         'ünïcôdé £ …', '“curly”', 'tab\tseparated",']

            def random_field(min_len=0):
                n = rng.randint(min_len, 4)
                parts = [rng.choice(fragments) for _ in range(n)]
                return " ".join(parts) if parts else ("x" if min_len else "")

            def quantized():
                x = rng.uniform(-1, 1)
                for _ in range(3):
                    y = float(format(x, ".15g"))
                    if y == x:
                        return x
                    x = y
                return x

            path = tmp_path / "roundtrip.csv"
            for _ in range(1000):
                rows = [
                    DatasetRow(
                        claim=random_field(min_len=1),
                        rating=rng.choice(list(Rating)),
                        sentiment=quantized(),
                        origin=random_field(),
                        source_url="https://e/fc/%d" % rng.randint(0, 99),
                        record_id=rng.randint(0, 2**64 - 1),
                    )
                    for _ in range(rng.randint(0, 5))
                ]
                write_csv(rows, path)
                assert read_csv(path) == rows
                frame = pd.read_csv(path, dtype=str, keep_default_na=False)
                assert len(frame) == len(rows)


def test_c11_end_to_end_determinism(tmp_path, fixture_pages_glob, fixture_cache_dir,
                                    server, capsys):
    with criterion(11, "offline runs are byte-identical and rate limits hold at the server"):
        with budget_ms(60000):
            out_a, out_b = tmp_path / "a", tmp_path / "b"
            for out in (out_a, out_b):
                code = cli.main([
                    "--output-dir", str(out), "run",
                    "--pages", fixture_pages_glob,
                    "--cache", str(fixture_cache_dir),
                    "--offline",
                ])
                assert code == 0
            capsys.readouterr()
            assert (out_a / "dataset.csv").read_bytes() == (out_b / "dataset.csv").read_bytes()
            assert (out_a / "stats.json").read_bytes() == (out_b / "stats.json").read_bytes()

            report = json.loads((out_a / "run_report.json").read_text("utf-8"))
            assert report["rows_emitted"] >= 1
            first_line = (out_a / "dataset.csv").read_text("utf-8").splitlines()[1]
            assert first_line.startswith(OREILLY_CLAIM)

            # live requests still respect the configured host spacing
            for i in range(4):
                server.page("/rate%d" % i, "x")
            crawler = Crawler(CrawlPolicy(min_interval_ms_per_host=150, max_retries=0,
                                          retry_backoff_ms=0, max_parallel=4,
                                          cache_dir=tmp_path / "rate-cache"))
            outcomes = crawler.fetch_all([server.url("/rate%d" % i) for i in range(4)])
            assert all(o.ok for o in outcomes)
            gaps = server.gaps_ms()
            assert len(gaps) == 3
            assert all(gap >= 150 for gap in gaps), gaps
