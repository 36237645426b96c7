"""Training-sentence generation: grammar skeletons x word pools x slot values."""

from __future__ import annotations

import random
import re
import warnings
from dataclasses import dataclass
from itertools import permutations
from typing import Mapping, Sequence

from .errors import IntentGenWarning
from .grammar import Grammar, Symbol
from .kg import local_name
from .model import AnnotatedSentence, Intent, Modifier, SlotSpan
from .slots import BOOLEAN_TYPES, DATE_TYPES, NUMBER_TYPES, TEXT_TYPES, TIME_TYPES, is_datatype

DEFAULT_CAP = 50

_SITE_FAMILIES = {
    "Date": DATE_TYPES,
    "DateTime": DATE_TYPES,
    "Time": TIME_TYPES,
    "Number": NUMBER_TYPES,
    "Integer": NUMBER_TYPES,
    "Float": NUMBER_TYPES,
    "Text": TEXT_TYPES,
    "Boolean": BOOLEAN_TYPES,
}

_CAMEL = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")
_VOWELS = "aeiou"


def tokenize_type_name(name: str) -> str:
    """``HotelRoom`` -> ``hotel room``."""
    return " ".join(part.lower() for part in _CAMEL.split(local_name(name)) if part)


def gerund(verb: str) -> str:
    """-ing form of the first word of a (possibly multiword) verb."""
    head, *rest = verb.replace("_", " ").split()
    lower = head.lower()
    if lower.endswith("ie"):
        form = head[:-2] + "ying"
    elif lower.endswith("e") and not lower.endswith(("ee", "ye", "oe")) and len(lower) > 2:
        form = head[:-1] + "ing"
    elif _doubles_final(lower):
        form = head + head[-1] + "ing"
    else:
        form = head + "ing"
    return " ".join([form] + rest)


def _doubles_final(word: str) -> bool:
    # One-syllable words ending consonant-vowel-consonant: plan -> planning.
    if len(word) < 3 or word[-1] in _VOWELS + "wxy":
        return False
    if not (word[-2] in _VOWELS and word[-3] not in _VOWELS):
        return False
    groups = re.findall(r"[aeiou]+", word)
    return len(groups) == 1


def site_accepts(site_type: str, modifier: Modifier) -> bool:
    if site_type == "*":
        return True
    if site_type == "Entity":
        return not is_datatype(modifier.value_type)
    family = _SITE_FAMILIES.get(site_type)
    if family is not None:
        return modifier.value_type in family
    return local_name(modifier.value_type) == site_type


@dataclass(frozen=True)
class _Candidate:
    sentence: AnnotatedSentence
    verb: str
    modifiers: frozenset[str]


def _bindings(sites: list[str], modifiers: Sequence[Modifier], samples: Mapping[str, Sequence[str]]):
    """Distinct modifier assignments to slot sites.

    Sites of the same type take modifiers in their intent order, so a
    ``from {MOD:Date} to {MOD:Date}`` pair reads check-in then check-out.
    """
    usable = [m for m in modifiers if samples.get(m.name)]
    if not sites:
        return [()]
    out = []
    for combo in permutations(usable, len(sites)):
        if not all(site_accepts(t, m) for t, m in zip(sites, combo)):
            continue
        ordered = True
        for i in range(len(sites)):
            for j in range(i + 1, len(sites)):
                if sites[i] == sites[j] and usable.index(combo[i]) > usable.index(combo[j]):
                    ordered = False
        if ordered:
            out.append(combo)
    return out


def _realize(skeleton: tuple[Symbol, ...], verb: str, noun: str,
             fills: dict[int, tuple[Modifier, str]]) -> AnnotatedSentence | None:
    pieces: list[tuple[str, Modifier | None]] = []
    for i, sym in enumerate(skeleton):
        if sym.kind == "terminal":
            pieces.append((sym.value, None))
        elif sym.kind == "lexical":
            word = {"VERB": verb.replace("_", " "), "VERB_ING": gerund(verb),
                    "NOUN": noun.replace("_", " ")}[sym.value]
            pieces.append((word, None))
        else:
            modifier, value = fills[i]
            pieces.append((value, modifier))
    # a/an agreement on the article before the following word
    for i, (text, mod) in enumerate(pieces[:-1]):
        if mod is None and text == "a" and pieces[i + 1][0][:1].lower() in _VOWELS:
            pieces[i] = ("an", None)

    # "look for for a hotel room" and the like
    flat = [w.lower() for text, _ in pieces for w in text.split()]
    if any(a == b for a, b in zip(flat, flat[1:])):
        return None

    text_parts, spans, offset = [], [], 0
    for text, mod in pieces:
        if text_parts:
            offset += 1
        if mod is not None:
            spans.append(SlotSpan(offset, offset + len(text), mod.name, text))
        text_parts.append(text)
        offset += len(text)
    return AnnotatedSentence(" ".join(text_parts), tuple(spans))


def expand_all(intent: Intent, grammar: Grammar, verbs: Sequence[str], nouns: Sequence[str],
               samples: Mapping[str, Sequence[str]]) -> list[_Candidate]:
    """Every distinct sentence, in skeleton, verb, noun, binding, value order."""
    seen: set[str] = set()
    out: list[_Candidate] = []
    for skeleton in grammar.skeletons():
        site_idx = [i for i, s in enumerate(skeleton) if s.kind == "slot"]
        sites = [skeleton[i].value for i in site_idx]
        bindings = _bindings(sites, intent.modifiers, samples)
        for verb in verbs:
            for noun in nouns:
                for binding in bindings:
                    n_values = min((len(samples[m.name]) for m in binding), default=1)
                    for k in range(n_values):
                        fills = {i: (m, samples[m.name][k]) for i, m in zip(site_idx, binding)}
                        sentence = _realize(skeleton, verb, noun, fills)
                        if sentence is None or sentence.text in seen:
                            continue
                        seen.add(sentence.text)
                        out.append(_Candidate(sentence, verb, frozenset(m.name for m in binding)))
    return out


def build_sentences(intent: Intent, grammar: Grammar, verbs: Sequence[str], nouns: Sequence[str],
                    samples: Mapping[str, Sequence[str]], cap: int | None = DEFAULT_CAP,
                    seed: int = 42) -> list[AnnotatedSentence]:
    """Expand ``grammar`` over the word pools and slot samples.

    When there are more than ``cap`` sentences, one sentence per verb and per
    sampled modifier is chosen first and the rest of the cap is a seeded
    uniform sample.  The kept sentences stay in expansion order.
    """
    if cap is not None and cap < 1:
        raise ValueError("cap must be at least 1")
    verbs = list(dict.fromkeys(verbs))
    nouns = list(dict.fromkeys(nouns))
    if intent.modifiers and not grammar.has_slot_sites():
        warnings.warn("grammar has no slot sites; sentences will carry no modifiers",
                      IntentGenWarning, stacklevel=2)
    candidates = expand_all(intent, grammar, verbs, nouns, samples)
    if cap is None or len(candidates) <= cap:
        return [c.sentence for c in candidates]

    rng = random.Random(seed)
    chosen: list[int] = []
    chosen_set: set[int] = set()

    def cover(predicate):
        if any(predicate(candidates[i]) for i in chosen_set):
            return
        pool = [i for i, c in enumerate(candidates) if predicate(c)]
        if pool:
            pick = rng.choice(pool)
            chosen.append(pick)
            chosen_set.add(pick)

    for verb in verbs:
        cover(lambda c, v=verb: c.verb == v)
    for m in intent.modifiers:
        if samples.get(m.name):
            cover(lambda c, n=m.name: n in c.modifiers)
    if len(chosen) > cap:
        warnings.warn(f"cap {cap} is below the {len(chosen)} sentences needed to cover every verb "
                      "and modifier; coverage is incomplete", IntentGenWarning, stacklevel=2)
        chosen = chosen[:cap]
    else:
        rest = [i for i in range(len(candidates)) if i not in chosen_set]
        chosen.extend(rng.sample(rest, cap - len(chosen)))
    return [candidates[i].sentence for i in sorted(chosen)]
