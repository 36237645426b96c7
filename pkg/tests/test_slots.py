import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ADULTS, AMENITY, CHECKIN, VOCAB, make_kg
from intentgen.errors import IntentGenWarning
from intentgen.kg import DATE, NUMBER, SCHEMA, KnowledgeGraph
from intentgen.model import Modifier
from intentgen.slots import EntityVocabulary, SlotPopulator, build_value_query, split_path
from oracles import amenities_oracle, random_hotel_graph

S = SCHEMA
AMENITY_MOD = Modifier(AMENITY, S + "AmenityFeature", False)


def test_build_value_query_steps():
    pattern = build_value_query(AMENITY_MOD)
    assert pattern.start_type == S + "HotelRoom"
    assert pattern.steps == (S + "containedInPlace", S + "amenityFeature", S + "name")


def test_build_value_query_rendering():
    rendering = build_value_query(AMENITY_MOD).rendering
    assert rendering.splitlines() == [
        "PREFIX schema: <http://schema.org/>",
        "SELECT DISTINCT ?value WHERE {",
        "  ?n0 a schema:HotelRoom .",
        "  ?n0 schema:containedInPlace ?n1 .",
        "  ?n1 schema:amenityFeature ?n2 .",
        "  ?n2 schema:name ?value .",
        "} ORDER BY ?value",
    ]


def test_single_hop_query():
    pattern = build_value_query(Modifier(CHECKIN, DATE, True))
    assert pattern.start_type == S + "LodgingReservation"
    assert pattern.steps == (S + "checkinTime",)


def test_unknown_property_warns(kg):
    with pytest.warns(IntentGenWarning, match="bogusProp"):
        pattern = build_value_query(Modifier("Hotel.bogusProp", S + "Text", False), kg)
    assert pattern.steps == (S + "bogusProp",)


def test_type_segment_outside_range_warns(kg):
    with pytest.warns(IntentGenWarning, match="outside the range"):
        build_value_query(Modifier("HotelRoom.containedInPlace.Offer.name", S + "Text", False), kg)


@pytest.mark.parametrize("bad", ["hotel.name", "Hotel", "Hotel..name", "Hotel.Place.name", "Hotel.name.Place.Offer"])
def test_malformed_paths(bad):
    with pytest.raises(ValueError):
        split_path(bad)


def test_populate_amenities(kg):
    vocab = SlotPopulator(kg).populate(AMENITY_MOD)
    assert vocab.canonical_values == ["free wifi", "wellness"]
    assert vocab.values[0].synonyms == ["free wifi", "wireless internet", "wlan"]
    assert vocab.values[1].synonyms == ["wellness", "spa"]


def test_populate_restricted_to_named_graph(kg):
    assert SlotPopulator(kg, "search_action").populate(AMENITY_MOD).values == []
    assert SlotPopulator(kg, "hotels").populate(AMENITY_MOD).canonical_values == ["free wifi", "wellness"]


def test_date_slot_has_no_vocabulary(kg):
    assert SlotPopulator(kg).populate(Modifier(CHECKIN, DATE, True)).values == []


def test_iri_leaf_without_name_warns():
    kg = make_kg()
    kg.create_graph("g")
    kg.add("http://x/r", "http://www.w3.org/1999/02/22-rdf-syntax-ns#type", S + "HotelRoom", "g")
    kg.add("http://x/r", S + "containedInPlace", "http://x/h", "g")
    kg.add("http://x/h", S + "amenityFeature", "http://x/f", "g")
    mod = Modifier("HotelRoom.containedInPlace.Hotel.amenityFeature", S + "LocationFeatureSpecification", False)
    with pytest.warns(IntentGenWarning, match="no schema:name"):
        vocab = SlotPopulator(kg).populate(mod)
    assert vocab.values == []


def test_vocabulary_round_trip(kg):
    vocab = SlotPopulator(kg).populate(AMENITY_MOD)
    data = vocab.to_dict()
    assert data["slotPath"] == AMENITY
    assert EntityVocabulary.from_dict(data) == vocab


def test_sample_amenities_matches_stdlib_sampling(kg):
    pop = SlotPopulator(kg)
    expected = random.Random(42).sample(["free wifi", "wellness"], 2)
    assert pop.sample_values(AMENITY_MOD, 2, 42) == expected
    assert sorted(pop.sample_values(AMENITY_MOD, 5, 1)) == ["free wifi", "wellness"]


def test_sample_dates_and_numbers(kg):
    pop = SlotPopulator(kg)
    assert pop.sample_values(Modifier(CHECKIN, DATE, True), 3, 0) == ["27.05.2018", "28.05.2018", "29.05.2018"]
    assert pop.sample_values(Modifier(CHECKIN, DATE, True), 2, 0, start_offset=3) == ["30.05.2018", "31.05.2018"]
    assert pop.sample_values(Modifier(ADULTS, NUMBER, True), 3, 0) == ["2", "4", "6"]


def test_text_placeholder_on_empty_graph():
    pop = SlotPopulator(make_kg())
    assert pop.sample_values(Modifier("Hotel.name", S + "Text", False), 2, 0) == ["{Hotel.name}"]


def test_sample_needs_positive_k(kg):
    with pytest.raises(ValueError):
        SlotPopulator(kg).sample_values(AMENITY_MOD, 0, 0)


def _kg_from(triples):
    kg = KnowledgeGraph()
    kg.load_vocabulary(VOCAB)
    kg.create_graph("g")
    for t in triples:
        kg.add(*t, "g")
    kg.apply_entailment("g")
    return kg


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_amenities_follow_links_in_either_direction(seed):
    triples, facts = random_hotel_graph(random.Random(seed))
    kg = _kg_from(triples)
    got = SlotPopulator(kg).populate(AMENITY_MOD).canonical_values
    assert got == amenities_oracle(triples, facts)
