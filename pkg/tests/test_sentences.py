import random
import re
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ADULTS, AMENITY, CHECKIN, CHECKOUT, hotel_search_intent, hotel_search_samples
from intentgen.errors import IntentGenWarning
from intentgen.grammar import parse_grammar
from intentgen.model import Intent
from intentgen.sentences import build_sentences, expand_all, gerund, tokenize_type_name

VERBS = ["search", "look for", "seek", "find", "explore", "look around", "need", "rout up"]
NOUNS = ["hotel room", "lodging reservation", "hotel", "accommodation"]


@pytest.fixture(scope="module")
def everything(grammar):
    return build_sentences(hotel_search_intent(), grammar, VERBS, NOUNS, hotel_search_samples(), cap=None)


@pytest.mark.parametrize("name,words", [
    ("HotelRoom", "hotel room"), ("LodgingReservation", "lodging reservation"),
    ("http://schema.org/Hotel", "hotel"), ("AmenityFeature", "amenity feature"), ("Room2Go", "room2 go"),
])
def test_tokenize_type_name(name, words):
    assert tokenize_type_name(name) == words


@pytest.mark.parametrize("verb,form", [
    ("search", "searching"), ("look for", "looking for"), ("look_around", "looking around"),
    ("seek", "seeking"), ("explore", "exploring"), ("need", "needing"), ("shop", "shopping"),
    ("plan", "planning"), ("tie", "tying"), ("see", "seeing"), ("rout up", "routing up"),
    ("fix", "fixing"), ("open", "opening"),
])
def test_gerund(verb, form):
    assert gerund(verb) == form


def test_expected_sentences_present(everything):
    texts = {s.text for s in everything}
    for sentence in [
        "I search for a hotel room",
        "We search for a lodging reservation",
        "find a hotel room with free wifi",
        "I am looking around for a hotel room for 4",
        "I want to search for a hotel room from 27.05.2018 to 30.05.2018",
        "looking for an accommodation",
        "We are seeking a hotel room",
    ]:
        assert sentence in texts


def test_amenity_span_in_example(everything):
    (s,) = [s for s in everything if s.text == "find a hotel room with free wifi"]
    (span,) = s.spans
    assert (span.start, span.end, span.modifier, span.value) == (23, 32, AMENITY, "free wifi")


def test_date_range_reads_checkin_then_checkout(everything):
    for s in everything:
        mods = [sp.modifier for sp in s.spans]
        if len(mods) == 2:
            assert mods == [CHECKIN, CHECKOUT]


def test_full_expansion_size_and_uniqueness(everything):
    texts = [s.text for s in everything]
    assert len(texts) == len(set(texts)) == 7200


def test_no_doubled_words(everything):
    for s in everything:
        words = s.text.lower().split()
        assert all(a != b for a, b in zip(words, words[1:]))


def test_spans_match_text_and_do_not_overlap(everything):
    for s in everything:
        last_end = -1
        for span in s.spans:
            assert s.text[span.start:span.end] == span.value
            assert span.start > last_end
            last_end = span.end


def _skeleton_regex(skeleton, verbs, nouns):
    alt = lambda words: "(?:" + "|".join(re.escape(w) for w in sorted(words, key=len, reverse=True)) + ")"  # noqa: E731
    parts = []
    for sym in skeleton:
        if sym.kind == "terminal":
            parts.append(re.escape(sym.value) if sym.value != "a" else "an?")
        elif sym.kind == "lexical":
            parts.append(alt({"VERB": verbs, "VERB_ING": [gerund(v) for v in verbs], "NOUN": nouns}[sym.value]))
        else:
            parts.append("<SLOT>")
    return re.compile(" ".join(parts) + r"\Z")


def test_every_sentence_parses_back(grammar, everything):
    patterns = [_skeleton_regex(sk, VERBS, NOUNS) for sk in grammar.skeletons()]
    for s in everything:
        text = s.text
        for span in reversed(s.spans):
            text = text[:span.start] + "<SLOT>" + text[span.end:]
        assert any(p.match(text) for p in patterns), s.text


def _select_reference(candidates, verbs, modifiers, cap, seed):
    """Straight re-statement of the selection rule: cover verbs, then modifiers, then fill."""
    rng = random.Random(seed)
    picked = []
    groups = [[i for i, c in enumerate(candidates) if c.verb == v] for v in verbs]
    groups += [[i for i, c in enumerate(candidates) if m in c.modifiers] for m in modifiers]
    for pool in groups:
        if pool and not set(pool) & set(picked):
            picked.append(rng.choice(pool))
    if len(picked) > cap:
        return sorted(picked[:cap])
    rest = [i for i in range(len(candidates)) if i not in picked]
    return sorted(picked + rng.sample(rest, cap - len(picked)))


@pytest.mark.parametrize("cap,seed", [(20, 42), (50, 42), (50, 7), (12, 0)])
def test_capped_selection_matches_reference(grammar, cap, seed):
    intent, samples = hotel_search_intent(), hotel_search_samples()
    candidates = expand_all(intent, grammar, VERBS, NOUNS, samples)
    want = _select_reference(candidates, VERBS, [m.name for m in intent.modifiers], cap, seed)
    got = build_sentences(intent, grammar, VERBS, NOUNS, samples, cap=cap, seed=seed)
    assert got == [candidates[i].sentence for i in want]


def test_cap_covers_every_verb_and_modifier(grammar):
    got = build_sentences(hotel_search_intent(), grammar, VERBS, NOUNS, hotel_search_samples(), cap=20, seed=42)
    assert len(got) == 20
    texts = " ".join(s.text for s in got)
    for v in VERBS:
        assert v in texts or gerund(v) in texts
    used = {sp.modifier for s in got for sp in s.spans}
    assert used == {CHECKIN, CHECKOUT, ADULTS, AMENITY}


def test_cap_golden(grammar):
    got = build_sentences(hotel_search_intent(), grammar, VERBS[:2], NOUNS[:1], hotel_search_samples(), cap=6, seed=42)
    assert [s.text for s in got] == [
        "look for a hotel room for 2",
        "look for a hotel room from 29.05.2018 to 01.06.2018",
        "We search for a hotel room on 31.05.2018",
        "I want to search a hotel room on 28.05.2018",
        "I am searching a hotel room from 28.05.2018 to 31.05.2018",
        "searching for a hotel room with wellness",
    ]


def test_small_cap_warns_about_coverage(grammar):
    with pytest.warns(IntentGenWarning, match="coverage"):
        got = build_sentences(hotel_search_intent(), grammar, VERBS, NOUNS, hotel_search_samples(), cap=5, seed=42)
    assert len(got) == 5


def test_deterministic_for_fixed_seed(grammar):
    a = build_sentences(hotel_search_intent(), grammar, VERBS, NOUNS, hotel_search_samples(), cap=50, seed=3)
    b = build_sentences(hotel_search_intent(), grammar, VERBS, NOUNS, hotel_search_samples(), cap=50, seed=3)
    assert a == b


def test_minimal_grammar_without_modifiers():
    g = parse_grammar('S -> VERB "a" NOUN')
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        got = build_sentences(Intent("buy", ["Product"]), g, ["buy"], ["product", "item"], {})
    assert [s.text for s in got] == ["buy a product", "buy an item"]
    assert all(s.spans == () for s in got)


def test_grammar_without_slot_sites_warns():
    g = parse_grammar('S -> VERB "a" NOUN')
    with pytest.warns(IntentGenWarning, match="slot sites"):
        got = build_sentences(hotel_search_intent(), g, ["search"], ["hotel room"], hotel_search_samples())
    assert [s.text for s in got] == ["search a hotel room"]


def test_bad_cap():
    with pytest.raises(ValueError):
        build_sentences(hotel_search_intent(), parse_grammar('S -> VERB'), ["x"], ["y"], {}, cap=0)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from(VERBS), min_size=1, max_size=4, unique=True),
       st.lists(st.sampled_from(NOUNS), min_size=1, max_size=3, unique=True),
       st.integers(1, 60), st.integers(0, 1000))
def test_capped_output_is_a_subset_of_the_expansion(grammar, verbs, nouns, cap, seed):
    intent, samples = hotel_search_intent(), hotel_search_samples()
    full = [c.sentence for c in expand_all(intent, grammar, verbs, nouns, samples)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        got = build_sentences(intent, grammar, verbs, nouns, samples, cap=cap, seed=seed)
    assert len(got) == min(cap, len(full))
    positions = [full.index(s) for s in got]
    assert positions == sorted(set(positions))
