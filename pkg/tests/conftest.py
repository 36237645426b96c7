import os
from pathlib import Path

import pytest

from intentgen.embeddings import load_vectors
from intentgen.grammar import load_grammar
from intentgen.kg import DATE, NUMBER, SCHEMA, KnowledgeGraph
from intentgen.lexicon import load_wordnet
from intentgen.model import Intent, Modifier

DATA = Path(__file__).resolve().parents[1] / "src" / "intentgen" / "data"
VOCAB = DATA / "schemaorg-mini.nt"
MINI_WORDNET = DATA / "mini-wordnet"
FULL_WORDNET = Path(os.path.expanduser("~/nltk_data/corpora/wordnet"))

AMENITY = "HotelRoom.containedInPlace.Hotel.amenityFeature.name"
CHECKIN = "LodgingReservation.checkinTime"
CHECKOUT = "LodgingReservation.checkoutTime"
ADULTS = "LodgingReservation.numAdults"


def make_kg(*graphs, entail=True):
    kg = KnowledgeGraph()
    kg.load_vocabulary(VOCAB)
    for name in graphs:
        kg.ingest_jsonld((DATA / f"{name}.jsonld").read_bytes(), name)
        if entail:
            kg.apply_entailment(name)
    return kg


def hotel_search_modifiers():
    return [
        Modifier(CHECKIN, DATE, True),
        Modifier(CHECKOUT, DATE, True),
        Modifier(ADULTS, NUMBER, True),
        Modifier(AMENITY, SCHEMA + "AmenityFeature", False),
    ]


def hotel_search_intent():
    return Intent("search", ["HotelRoom", "LodgingReservation"], [], hotel_search_modifiers())


def hotel_search_samples():
    return {
        CHECKIN: ["27.05.2018", "28.05.2018", "29.05.2018"],
        CHECKOUT: ["30.05.2018", "31.05.2018", "01.06.2018"],
        ADULTS: ["2", "4", "6"],
        AMENITY: ["free wifi", "wellness"],
    }


@pytest.fixture
def kg():
    return make_kg("search_action", "hotels")


@pytest.fixture(scope="session")
def lexicon():
    return load_wordnet(MINI_WORDNET)


@pytest.fixture(scope="session")
def generic():
    return load_vectors(DATA / "toy-generic.vec", "generic")


@pytest.fixture(scope="session")
def domain():
    return load_vectors(DATA / "toy-domain.vec", "domain")


@pytest.fixture(scope="session")
def grammar():
    return load_grammar()


_ACCEPTANCE: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    status = "PASS" if rep.passed else "FAIL"
    if dict(item.user_properties).get("soft"):
        status = "INFO"
    line = f"[{status}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
    _ACCEPTANCE[str(number)] = line


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for key in sorted(_ACCEPTANCE, key=lambda k: (int(k.rstrip("ab")), k)):
            terminalreporter.write_line(_ACCEPTANCE[key])
