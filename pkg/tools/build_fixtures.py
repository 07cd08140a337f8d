#!/usr/bin/env python3
"""Regenerate the offline fixture corpus (feed pages + crawl cache).

Run from the repository root after `pip install -e .`:

    python tools/build_fixtures.py

Output is deterministic: fixed record ids, fixed fetch timestamps, stable
JSON key order. The cache is written through claimcred's own cache layer so
the on-disk layout always matches what the crawler expects.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

from claimcred import ingest
from claimcred.crawler import CrawlResult, HttpCache

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

FETCHED_AT = 1545139836000  # one frozen fetch time for the whole corpus

OREILLY_TWEET = (
    "Was Bill O'Reilly found dead at his Long Island home? "
    "https://t.co/SGwagACMbW https://t.co/Ppx1FhJeMm"
)
OREILLY_CLAIM = "Former Fox News host Bill O'Reilly was found dead on Long Island."
OREILLY_ORIGIN_P1 = (
    "On 21 May 2017, the Daily USA Update web site published an article "
    "purporting to reveal “more details about the sad death” of "
    "former Fox News anchor Bill O’Reilly:"
)
OREILLY_ORIGIN_QUOTE = (
    "The Islip Coroner’s Office stated that last night, former Fox News "
    "host Bill O’Reilly was found unresponsive at his Long Island home "
    "and could not be revived."
)
OREILLY_URL = "https://www.snopes.com/fact-check/bill-oreilly-found-dead/"

FIXTURE_HOST = "https://fact-check.example.org"

PAGE_TEMPLATE = """<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>{title}</title>
</head>
<body>
<nav><a href="/">Fact Checks</a></nav>
<article>
  <header><h1>{title}</h1></header>
  <div class="claim-wrapper">
    <p class="claim">{claim}</p>
  </div>
  {rating_block}
  <div class="post-body-card post-card card">
    <h3 class="card-header"> Origin</h3>
    <div class="card-body">
      <p>{origin_p1}</p>
      <blockquote><p>{origin_quote}</p></blockquote>
    </div>
  </div>
</article>
<footer><p>Offline fixture page for pipeline tests.</p></footer>
</body>
</html>
"""

RATING_BLOCK = (
    '<div class="rating-wrapper">\n'
    '    <span class="rating-name rating-label-{slug}">{label}</span>\n'
    "  </div>"
)


def claim_entry(record_id, short_code, page_slug, rating_slug, rating_label, title,
                tweet, claim, origin_p1, origin_quote, event_occurred,
                date_ms, likes, retweets, hint=None):
    return {
        "record_id": record_id,
        "short_urls": ["https://t.co/" + short_code],
        "final_url": "%s/fact-check/%s/" % (FIXTURE_HOST, page_slug),
        "rating_slug": rating_slug,
        "rating_label": rating_label,
        "title": title,
        "tweet": tweet,
        "claim": claim,
        "origin_p1": origin_p1,
        "origin_quote": origin_quote,
        "event_occurred": event_occurred,
        "date_ms": date_ms,
        "likes": likes,
        "retweets": retweets,
        "sentiment_hint": hint,
    }


def build_manifest():
    oreilly = claim_entry(
        record_id=1075020507186126853,
        short_code="SGwagACMbW",
        page_slug="bill-oreilly-found-dead",
        rating_slug="false",
        rating_label="False",
        title="Was Bill O'Reilly Found Dead?",
        tweet=OREILLY_TWEET,
        claim=OREILLY_CLAIM,
        origin_p1=OREILLY_ORIGIN_P1,
        origin_quote=OREILLY_ORIGIN_QUOTE,
        event_occurred=False,
        date_ms=1545139836000,
        likes=4,
        retweets=2,
        hint=-1,
    )
    oreilly["short_urls"] = ["https://t.co/SGwagACMbW", "https://t.co/Ppx1FhJeMm"]
    oreilly["final_url"] = OREILLY_URL

    base_id = 1075020600000000001
    base_date = 1545140000000
    rows = [
        ("whale-rescue", "true", "True", "Did Volunteers Rescue a Stranded Whale?",
         "Did kind volunteers really rescue that stranded whale? https://t.co/Whale01Resc",
         "Kind volunteers rescued a stranded whale in a wonderful beach operation.",
         "On 3 June 2018, coastal patrol volunteers spent six hours refloating a "
         "stranded whale near the harbor, and video of the operation spread quickly.",
         "Harbor patrol logs and local footage confirm the animal swam off unharmed.",
         True, 12, 7, "Whale01Resc"),
        ("hospital-donor", "mostly-true", "Mostly True",
         "Did a Donor Pay Hundreds of Hospital Bills?",
         "Generous donor pays hospital bills for hundreds of families? https://t.co/Donor02Bill",
         "A generous donor paid the hospital bills of hundreds of grateful families.",
         "On 14 February 2018, a regional hospital confirmed that an anonymous donor "
         "had settled outstanding bills for most, though not all, of the families "
         "named in the viral post.",
         "Hospital statements put the covered amount slightly below what the post claimed.",
         True, 31, 18, "Donor02Bill"),
        ("city-blackout", "mostly-false", "Mostly False",
         "Did a Foreign Attack Cause the Blackout?",
         "Was the blackout really caused by a foreign attack? https://t.co/Power03Outg",
         "A hostile foreign attack caused the city blackout.",
         "On 9 March 2018, the utility traced the blackout to equipment failure at a "
         "single substation; investigators found no sign of outside interference.",
         "A brief intrusion attempt did occur that week, but it never reached grid controls.",
         False, 55, 40, "Power03Outg"),
        ("ferry-schedule", "outdated", "Outdated",
         "Does the Harbor Ferry Run on the Winter Schedule?",
         "Is the harbor ferry still using the winter schedule? https://t.co/Ferry04Schd",
         "The harbor ferry still runs on the old winter schedule.",
         "On 2 April 2018, the transit authority replaced the winter ferry schedule "
         "with an expanded spring timetable, so posts citing the winter hours no "
         "longer describe current service.",
         "The winter schedule was accurate when the post first circulated.",
         False, 3, 1, "Ferry04Schd"),
        ("storm-photo", "miscaptioned", "Miscaptioned",
         "Does a Photo Show This Week's Storm Flooding?",
         "Startling photo of this week's storm flooding downtown? https://t.co/Storm05Foto",
         "A photo shows this week's terrible storm flooding downtown.",
         "On 18 September 2017, the image began circulating with captions tying it "
         "to the current storm, but the photograph was taken years earlier in a "
         "different city.",
         "Reverse image search places the original upload three years before the storm.",
         False, 67, 52, "Storm05Foto"),
        ("poster-quote", "misattributed", "Misattributed",
         "Did a Beloved Author Write the Poster Quote?",
         "Who really wrote that poster quote about courage? https://t.co/Quote06Poet",
         "A beloved author wrote the famous poster quote about courage.",
         "On 11 January 2018, archivists noted that the line appears nowhere in the "
         "author's published work and was first printed in an unrelated 1989 "
         "magazine essay.",
         "The author's estate also denies any connection to the quotation.",
         False, 21, 9, "Quote06Poet"),
        ("overnight-cure", "unproven", "Unproven",
         "Does a Miracle Cure Heal the Rare Disease Overnight?",
         "Miracle cure heals rare disease overnight? https://t.co/Cure07Night",
         "A miracle cure heals the rare disease overnight.",
         "On 27 July 2018, a supplement vendor began promoting the treatment, but no "
         "peer-reviewed trial has tested the claimed overnight recovery.",
         "Regulators have opened an inquiry into the marketing material.",
         False, 44, 35, "Cure07Night"),
        ("budget-report", "mixture", "Mixture",
         "Does the Budget Report Mislead?",
         "What holds up in that viral budget report? https://t.co/Budgt08Repo",
         "The report mixed accurate budget figures with misleading charts.",
         "On 30 October 2017, analysts verified the report's headline figures against "
         "public ledgers while flagging two charts whose axes overstate the trend.",
         "The underlying totals are correct; the visual framing is not.",
         True, 8, 2, "Budgt08Repo"),
        ("lighthouse-ghost", "legend", "Legend",
         "Does a Ghost Haunt the Abandoned Lighthouse?",
         "Does a ghost haunt the abandoned lighthouse every winter? https://t.co/Ghost09Lite",
         "A ghost haunts the abandoned lighthouse every winter.",
         "On 31 October 2016, the story resurfaced as it does each year; the tale "
         "goes back to a 1921 newspaper serial and no sighting has ever been "
         "documented.",
         "Caretakers attribute the winter noises to wind in the lantern room.",
         False, 90, 76, "Ghost09Lite"),
        ("prize-email", "scam", "Scam",
         "Is the Prize Email a Scam?",
         "That prize email is emptying bank accounts. https://t.co/Prize10Mail",
         "A fraudulent email scam stole savings from terrified victims.",
         "On 5 May 2018, banking regulators warned that the message harvests login "
         "codes; several victims reported drained accounts within hours.",
         "The sender addresses rotate daily, which is typical of phishing kits.",
         True, 102, 88, "Prize10Mail"),
        ("senator-poster", "correct-attribution", "Correct Attribution",
         "Did the Senator Say the Poster Words?",
         "Did the senator really say the words on that poster? https://t.co/Sentr11Post",
         "The senator did say the kind words printed on the campaign poster.",
         "On 22 August 2018, full video of the town hall confirmed the poster quotes "
         "the senator's remarks verbatim.",
         "The campaign published the transcript alongside the recording.",
         True, 15, 6, "Sentr11Post"),
    ]
    claims = [oreilly]
    for i, (slug, rslug, rlabel, title, tweet, claim, p1, quote, event,
            likes, retweets, code) in enumerate(rows):
        claims.append(
            claim_entry(
                record_id=base_id + i,
                short_code=code,
                page_slug=slug,
                rating_slug=rslug,
                rating_label=rlabel,
                title=title,
                tweet=tweet,
                claim=claim,
                origin_p1=p1,
                origin_quote=quote,
                event_occurred=event,
                date_ms=base_date + i * 60000,
                likes=likes,
                retweets=retweets,
            )
        )

    # Page with a claim but no rating section: dropped as unrated.
    claims.append(
        claim_entry(
            record_id=base_id + 100,
            short_code="Statu12Gold",
            page_slug="mayor-statue",
            rating_slug=None,
            rating_label=None,
            title="Did the Mayor Unveil a Gold Statue?",
            tweet="Did the mayor unveil a gold statue of himself? https://t.co/Statu12Gold",
            claim="The mayor unveiled a gold statue of himself at city hall.",
            origin_p1="On 12 December 2017, the rumor spread from a parody account; city "
                      "hall has commissioned no statue.",
            origin_quote="The procurement office confirmed no such contract exists.",
            event_occurred=False,
            date_ms=base_date + 1200000,
            likes=2,
            retweets=0,
        )
    )
    # Rating outside the 12-label taxonomy: parsed, then dropped as unknown.
    claims.append(
        claim_entry(
            record_id=base_id + 101,
            short_code="Moon13Joke",
            page_slug="moon-satire",
            rating_slug="satire",
            rating_label="Satire",
            title="Did the Moon Cancel Its Full Phase?",
            tweet="Tabloid says the moon canceled its full phase. https://t.co/Moon13Joke",
            claim="A tabloid joked that the moon canceled its full phase this month.",
            origin_p1="On 1 April 2018, the piece ran in a humor column and was shared "
                      "as though it were reporting.",
            origin_quote="The column is labeled as satire on the tabloid's own site.",
            event_occurred=False,
            date_ms=base_date + 1260000,
            likes=7,
            retweets=4,
        )
    )
    return claims


def record_json(rec_id, tweet, date_ms, likes, retweets, hint, source="AgoraPulse Manager"):
    return {
        "tweets": tweet,
        "id": rec_id,
        "len": len(tweet),
        "date": date_ms,
        "source": source,
        "likes": likes,
        "retweets": retweets,
        "time": date_ms,
        "geo": None,
        "sentiment": hint,
        "token_list": ingest.tokenize(tweet),
    }


def render_page(entry):
    if entry["rating_slug"] is None:
        rating_block = "<!-- no rating section on this page -->"
    else:
        rating_block = RATING_BLOCK.format(
            slug=entry["rating_slug"], label=entry["rating_label"]
        )
    return PAGE_TEMPLATE.format(
        title=entry["title"],
        claim=entry["claim"],
        rating_block=rating_block,
        origin_p1=entry["origin_p1"],
        origin_quote=entry["origin_quote"],
    )


def write_cache_entry(cache, url, status, headers, body):
    cache.write(
        CrawlResult(
            requested_url=url,
            final_url=url,
            status=status,
            body=body,
            fetched_at=FETCHED_AT,
            from_cache=False,
            headers=headers,
        )
    )


def main():
    claims = build_manifest()
    by_record = {c["record_id"]: c for c in claims}

    pages_dir = FIXTURES / "pages"
    cache_dir = FIXTURES / "cache"
    shutil.rmtree(FIXTURES, ignore_errors=True)
    pages_dir.mkdir(parents=True)
    cache_dir.mkdir(parents=True)

    def rec(entry):
        return record_json(
            entry["record_id"], entry["tweet"], entry["date_ms"],
            entry["likes"], entry["retweets"], entry["sentiment_hint"],
        )

    # Record with no crawlable URL: a bare domain and an ftp link.
    archive_tweet = (
        "Archive mirror at fact-check.example.org/archive and "
        "ftp://files.example.org/pub/claims.txt has the full dump"
    )
    archive_record = record_json(1075020600000001000, archive_tweet,
                                 1545141300000, 0, 0, None)

    ordered = claims  # manifest order: O'Reilly first, then the 11 ratings, then extras
    page1 = {"8": rec(ordered[0])}
    page2 = {str(i): rec(ordered[1 + i]) for i in range(6)}
    page3_entries = [rec(ordered[7 + i]) for i in range(5)]  # unproven .. correct-attribution
    page3_entries.append(rec(ordered[12]))  # unrated page record
    page3_entries.append(rec(ordered[13]))  # satire record
    page3_entries.append(archive_record)
    page3_entries.append(rec(ordered[1]))  # duplicate id of the whale record
    page3 = {str(i): entry for i, entry in enumerate(page3_entries)}

    for name, page in (("page_01.json", page1), ("page_02.json", page2),
                       ("page_03.json", page3)):
        (pages_dir / name).write_text(
            json.dumps(page, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
            "utf-8",
        )

    cache = HttpCache(cache_dir)
    for entry in claims:
        final = entry["final_url"]
        for short in entry["short_urls"]:
            write_cache_entry(cache, short, 301, {"location": final}, b"")
        html = render_page(entry).encode("utf-8")
        write_cache_entry(
            cache, final, 200, {"content-type": "text/html; charset=utf-8"}, html
        )

    manifest = {
        "fetched_at": FETCHED_AT,
        "records_loaded": 1 + len(page2) + len(page3),
        "records_after_dedup": len(claims) + 1,  # +1 archive record
        "claims": claims,
        "archive_record_id": archive_record["id"],
        "event_oracle": {str(c["record_id"]): c["event_occurred"] for c in claims},
    }
    (FIXTURES / "manifest.json").write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        "utf-8",
    )
    print("wrote %d pages, %d claims, cache at %s" % (3, len(claims), cache_dir))


if __name__ == "__main__":
    sys.exit(main())
