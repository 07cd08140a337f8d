"""Join parsed pages, ratings and sentiment into dataset rows; CSV/JSON I/O."""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .errors import AlignmentError, ParseError
from .ratings import Rating, parse_display_label

CSV_COLUMNS = ("claim", "rating", "sentiment", "origin", "source_url", "record_id")

# Sentiment is serialized with 15 significant digits; a value parsed back
# from such a string round-trips bit-exactly.
_SENTIMENT_FMT = ".15g"


@dataclass
class DatasetRow:
    claim: str
    rating: Rating
    sentiment: float
    origin: str
    source_url: str
    record_id: int


@dataclass
class AssembleResult:
    rows: list[DatasetRow]
    dropped_unrated: int
    dropped_duplicate: int

    @property
    def dropped(self):
        return self.dropped_unrated + self.dropped_duplicate


def assemble(parsed, scores, ratings, record_ids=None):
    """Build rows from index-aligned stage outputs.

    ``None`` entries mark records that failed earlier (unrated page, unknown
    rating); they are dropped and counted. Duplicate claims (same claim text
    and source URL) collapse to their first occurrence.
    """
    if record_ids is None:
        record_ids = [0] * len(parsed)
    lengths = {len(parsed), len(scores), len(ratings), len(record_ids)}
    if len(lengths) != 1:
        raise AlignmentError(min(lengths), "input lists have different lengths")

    rows = []
    seen = set()
    dropped_unrated = 0
    dropped_duplicate = 0
    for i, (page, score, rating) in enumerate(zip(parsed, scores, ratings)):
        # an empty claim can never become a row; treat it like an unrated page
        if page is None or rating is None or not page.claim_text:
            dropped_unrated += 1
            continue
        if score is None:
            raise AlignmentError(i, "parsed page without a sentiment score")
        key = (page.claim_text, page.source_url)
        if key in seen:
            dropped_duplicate += 1
            continue
        seen.add(key)
        rows.append(
            DatasetRow(
                claim=page.claim_text,
                rating=rating,
                sentiment=score.value,
                origin=page.origin_text,
                source_url=page.source_url,
                record_id=record_ids[i],
            )
        )
    return AssembleResult(rows=rows, dropped_unrated=dropped_unrated,
                          dropped_duplicate=dropped_duplicate)


def format_sentiment(value):
    return format(value, _SENTIMENT_FMT)


def write_csv(rows, path):
    """RFC-4180 CSV with a header line; UTF-8; CRLF record separators.

    CRLF keeps quoting exact: a field containing a bare CR or LF is quoted,
    so every code point round-trips through read_csv.
    """
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(
                (
                    row.claim,
                    row.rating.display_label,
                    format_sentiment(row.sentiment),
                    row.origin,
                    row.source_url,
                    str(row.record_id),
                )
            )


def read_csv(path):
    rows = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("%s: missing header line" % path) from None
        if tuple(header) != CSV_COLUMNS:
            raise ParseError("%s: unexpected header %r" % (path, header))
        for record in reader:
            line = reader.line_num
            if len(record) != len(CSV_COLUMNS):
                raise ParseError(
                    "%s:%d: expected %d fields, got %d"
                    % (path, line, len(CSV_COLUMNS), len(record))
                )
            claim, rating_label, sentiment_s, origin, source_url, record_id_s = record
            try:
                rating = parse_display_label(rating_label)
            except Exception:
                raise ParseError("%s:%d: unknown rating %r" % (path, line, rating_label)) from None
            try:
                sentiment = float(sentiment_s)
                record_id = int(record_id_s)
            except ValueError as exc:
                raise ParseError("%s:%d: %s" % (path, line, exc)) from None
            rows.append(
                DatasetRow(
                    claim=claim,
                    rating=rating,
                    sentiment=sentiment,
                    origin=origin,
                    source_url=source_url,
                    record_id=record_id,
                )
            )
    return rows


def row_to_json(row):
    return {
        "claim": row.claim,
        "rating": row.rating.display_label,
        "sentiment": row.sentiment,
        "origin": row.origin,
        "source_url": row.source_url,
        "record_id": row.record_id,
    }


def row_from_json(obj):
    return DatasetRow(
        claim=obj["claim"],
        rating=parse_display_label(obj["rating"]),
        sentiment=obj["sentiment"],
        origin=obj["origin"],
        source_url=obj["source_url"],
        record_id=obj["record_id"],
    )
