import pandas as pd
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from claimcred import dataset
from claimcred.dataset import DatasetRow, assemble, format_sentiment, read_csv, write_csv
from claimcred.errors import AlignmentError, ParseError
from claimcred.page_parse import ParsedPage
from claimcred.ratings import Rating
from claimcred.sentiment import Polarity, SentimentScore


def _page(claim, url="https://fact-check.example.org/fact-check/x/", origin="o"):
    return ParsedPage(
        claim_html="<p class=\"claim\">%s</p>" % claim,
        rating_html="<span class=\"rating-name rating-label-false\">False</span>",
        origin_html="",
        claim_text=claim,
        rating_label="false",
        origin_text=origin,
        source_url=url,
    )


def _score(v):
    if v > 0:
        pol = Polarity.POSITIVE
    elif v < 0:
        pol = Polarity.NEGATIVE
    else:
        pol = Polarity.NEUTRAL
    return SentimentScore(value=v, polarity=pol)


class TestAssemble:
    def test_oreilly_shape(self):
        page = _page(
            "Former Fox News host Bill O'Reilly was found dead on Long Island.",
            url="https://www.snopes.com/fact-check/bill-oreilly-found-dead/",
            origin="On 21 May 2017, the Daily USA Update web site published an article",
        )
        result = assemble([page], [_score(-0.65)], [Rating.FALSE], record_ids=[1075020507186126853])
        (row,) = result.rows
        assert row.claim.startswith("Former Fox News host")
        assert row.rating is Rating.FALSE
        assert row.sentiment < 0
        assert row.origin.startswith("On 21 May 2017")
        assert row.record_id == 1075020507186126853

    def test_all_unrated(self):
        result = assemble([None, None, None], [None, None, None], [None, None, None])
        assert result.rows == []
        assert result.dropped == 3

    def test_ten_with_two_dups_and_one_unrated(self):
        pages = [None]  # the unrated one
        for i in range(9):
            pages.append(_page("claim %d" % (i % 7), url="https://e/fc/%d" % (i % 7)))
        scores = [None] + [_score(0.1)] * 9
        rats = [None] + [Rating.FALSE] * 9
        # set-based counting oracle over the synthetic manifest
        expected = len({(p.claim_text, p.source_url) for p in pages if p is not None})
        assert expected == 7
        result = assemble(pages, scores, rats)
        assert len(result.rows) == expected
        assert result.dropped + len(result.rows) == len(pages)

    def test_duplicate_keeps_first(self):
        a = _page("same", url="https://e/fc/1")
        b = _page("same", url="https://e/fc/1")
        result = assemble([a, b], [_score(0.2), _score(0.9)], [Rating.TRUE, Rating.TRUE],
                          record_ids=[1, 2])
        (row,) = result.rows
        assert row.sentiment == 0.2 and row.record_id == 1
        assert result.dropped_duplicate == 1

    def test_same_claim_different_url_not_duplicate(self):
        a = _page("same", url="https://e/fc/1")
        b = _page("same", url="https://e/fc/2")
        result = assemble([a, b], [_score(0.1), _score(0.2)], [Rating.TRUE, Rating.TRUE])
        assert len(result.rows) == 2

    def test_empty_claim_dropped(self):
        result = assemble([_page("")], [_score(0.1)], [Rating.TRUE])
        assert result.rows == [] and result.dropped_unrated == 1

    def test_misaligned_lengths(self):
        with pytest.raises(AlignmentError):
            assemble([_page("a")], [], [Rating.TRUE])

    def test_page_without_score_is_alignment_error(self):
        with pytest.raises(AlignmentError) as exc:
            assemble([_page("a")], [None], [Rating.TRUE])
        assert exc.value.index == 0

    def test_order_follows_input(self):
        pages = [_page("c%d" % i, url="https://e/fc/%d" % i) for i in range(5)]
        result = assemble(pages, [_score(0.0)] * 5, [Rating.MIXTURE] * 5)
        assert [r.claim for r in result.rows] == ["c0", "c1", "c2", "c3", "c4"]


def _row(claim="A claim.", rating=Rating.FALSE, sentiment=-0.5, origin="Origin text.",
         url="https://e/fc/x", record_id=7):
    return DatasetRow(claim=claim, rating=rating, sentiment=sentiment,
                      origin=origin, source_url=url, record_id=record_id)


class TestCsv:
    def test_golden_sample_line(self, tmp_path):
        row = _row(
            claim="Former Fox News host Bill O'Reilly was found dead on Long Island.",
            sentiment=float("-0.083333333333333"),
            origin="On 21 May 2017, the Daily USA Update web site published an article",
        )
        path = tmp_path / "d.csv"
        write_csv([row], path)
        lines = path.read_text("utf-8").splitlines()
        assert lines[1].startswith("Former Fox News host Bill O'Reilly")
        assert ",False,-0.083333333333333," in lines[1]

    def test_empty_dataset_header_only(self, tmp_path):
        path = tmp_path / "d.csv"
        write_csv([], path)
        assert path.read_bytes() == b"claim,rating,sentiment,origin,source_url,record_id\r\n"
        assert read_csv(path) == []

    def test_comma_and_quote_quoting_via_reference_parser(self, tmp_path):
        row = _row(claim='They said "no, never", twice.', origin="a,b\nnew line")
        path = tmp_path / "d.csv"
        write_csv([row], path)
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
        assert frame.iloc[0]["claim"] == 'They said "no, never", twice.'
        assert frame.iloc[0]["origin"] == "a,b\nnew line"
        assert read_csv(path) == [row]

    def test_all_twelve_labels_roundtrip(self, tmp_path):
        rows = [
            _row(claim="c%d" % i, rating=r, sentiment=0.0, record_id=i)
            for i, r in enumerate(Rating)
        ]
        path = tmp_path / "d.csv"
        write_csv(rows, path)
        assert read_csv(path) == rows

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("")
        with pytest.raises(ParseError, match="header"):
            read_csv(path)

    def test_unknown_rating_names_line(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text(
            "claim,rating,sentiment,origin,source_url,record_id\n"
            "c,NotARating,0.0,o,u,1\n"
        )
        with pytest.raises(ParseError, match=":2:"):
            read_csv(path)

    def test_wrong_field_count_names_line(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text(
            "claim,rating,sentiment,origin,source_url,record_id\n"
            "only,three,fields\n"
        )
        with pytest.raises(ParseError, match=":2:"):
            read_csv(path)


def _quantized():
    def fix(x):
        for _ in range(3):
            y = float(format(x, ".15g"))
            if y == x:
                return x
            x = y
        return x

    return st.floats(min_value=-1.0, max_value=1.0, allow_nan=False).map(fix)


# NUL cannot be represented in CSV (the csv module refuses it) and never
# occurs in parsed page text; everything else, commas, quotes, newlines and
# non-ASCII included, must survive the round trip.
_field_text = st.text(
    alphabet=st.characters(min_codepoint=1, max_codepoint=0x2FFF,
                           blacklist_categories=("Cs",)),
    max_size=40,
)

_rows = st.lists(
    st.builds(
        DatasetRow,
        claim=_field_text.filter(lambda s: s.strip()),
        rating=st.sampled_from(list(Rating)),
        sentiment=_quantized(),
        origin=_field_text,
        source_url=st.text(alphabet="abcdefgh:/.-", min_size=1, max_size=30),
        record_id=st.integers(min_value=0, max_value=2**64 - 1),
    ),
    max_size=8,
)


class TestRoundTripProperty:
    @settings(max_examples=120, deadline=None,
              suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(rows=_rows)
    def test_read_write_identity(self, tmp_path, rows):
        path = tmp_path / "d.csv"
        write_csv(rows, path)
        assert read_csv(path) == rows

    @settings(max_examples=60, deadline=None,
              suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(rows=_rows)
    def test_reference_parser_reads_every_file(self, tmp_path, rows):
        path = tmp_path / "d.csv"
        write_csv(rows, path)
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
        assert len(frame) == len(rows)

    def test_json_row_roundtrip(self):
        row = _row()
        assert dataset.row_from_json(dataset.row_to_json(row)) == row

    def test_sentiment_fifteen_significant_digits(self):
        assert format_sentiment(-1 / 12) == "-0.0833333333333333"
        assert len(format_sentiment(-1 / 12).lstrip("-0.").replace(".", "")) <= 15
