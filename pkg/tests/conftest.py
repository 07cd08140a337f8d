import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"

OREILLY_URL = "https://www.snopes.com/fact-check/bill-oreilly-found-dead/"
OREILLY_SHORT_URL = "https://t.co/SGwagACMbW"
OREILLY_TWEET = (
    "Was Bill O'Reilly found dead at his Long Island home? "
    "https://t.co/SGwagACMbW https://t.co/Ppx1FhJeMm"
)
OREILLY_CLAIM = "Former Fox News host Bill O'Reilly was found dead on Long Island."
OREILLY_TOKENS = ["Was", "Bill", "O", "Reilly", "found", "dead", "Long", "Island", "home"]


@pytest.fixture(scope="session")
def fixtures_dir():
    assert FIXTURES.is_dir(), "run tools/build_fixtures.py first"
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_manifest(fixtures_dir):
    return json.loads((fixtures_dir / "manifest.json").read_text("utf-8"))


@pytest.fixture(scope="session")
def fixture_cache_dir(fixtures_dir):
    return fixtures_dir / "cache"


@pytest.fixture(scope="session")
def fixture_pages_glob(fixtures_dir):
    return str(fixtures_dir / "pages" / "*.json")


@pytest.fixture()
def server():
    from fixture_server import FixtureServer

    with FixtureServer() as srv:
        yield srv
