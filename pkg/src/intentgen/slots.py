"""Entity vocabularies and sample values for intent slots.

A modifier path such as ``HotelRoom.containedInPlace.Hotel.amenityFeature.name``
compiles to a :class:`~intentgen.kg.Pattern` that starts at every HotelRoom
and follows ``containedInPlace``, ``amenityFeature`` and ``name``.  Type
segments (upper camel case) are only checked against the vocabulary.
"""

from __future__ import annotations

import datetime as _dt
import random
import warnings
from dataclasses import dataclass, field

from .errors import IntentGenWarning
from .kg import SCHEMA, KnowledgeGraph, Literal, Pattern, local_name, schema_iri
from .model import Modifier

NAME = SCHEMA + "name"
ALTERNATE_NAME = SCHEMA + "alternateName"

DATE_TYPES = frozenset({SCHEMA + "Date", SCHEMA + "DateTime"})
TIME_TYPES = frozenset({SCHEMA + "Time"})
NUMBER_TYPES = frozenset({SCHEMA + "Number", SCHEMA + "Integer", SCHEMA + "Float"})
TEXT_TYPES = frozenset({SCHEMA + "Text"})
BOOLEAN_TYPES = frozenset({SCHEMA + "Boolean"})
DATATYPES = DATE_TYPES | TIME_TYPES | NUMBER_TYPES | TEXT_TYPES | BOOLEAN_TYPES

PLACEHOLDER_EPOCH = _dt.date(2018, 5, 27)


def is_datatype(iri: str) -> bool:
    return iri in DATATYPES


@dataclass
class EntityEntry:
    value: str
    synonyms: list[str]


@dataclass
class EntityVocabulary:
    slot_path: str
    values: list[EntityEntry] = field(default_factory=list)

    @property
    def canonical_values(self) -> list[str]:
        return [e.value for e in self.values]

    def to_dict(self) -> dict:
        return {
            "slotPath": self.slot_path,
            "entries": [{"value": e.value, "synonyms": list(e.synonyms)} for e in self.values],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EntityVocabulary":
        return cls(data["slotPath"],
                   [EntityEntry(e["value"], list(e["synonyms"])) for e in data["entries"]])


def split_path(path: str) -> tuple[str, list[str], list[tuple[str, str | None]]]:
    """Split a modifier path into (start type, properties, (property, type) hops)."""
    segments = path.split(".")
    if len(segments) < 2 or not segments[0][:1].isupper():
        raise ValueError(f"malformed modifier path: {path!r}")
    hops: list[tuple[str, str | None]] = []
    for seg in segments[1:]:
        if not seg:
            raise ValueError(f"malformed modifier path: {path!r}")
        if seg[0].isupper():
            if not hops or hops[-1][1] is not None:
                raise ValueError(f"type segment {seg!r} must follow a property in {path!r}")
            hops[-1] = (hops[-1][0], seg)
        else:
            hops.append((seg, None))
    if not hops:
        raise ValueError(f"modifier path has no property: {path!r}")
    return segments[0], [p for p, _ in hops], hops


def render_sparql(pattern: Pattern) -> str:
    lines = ["PREFIX schema: <http://schema.org/>",
             f"SELECT DISTINCT ?{pattern.terminal} WHERE {{",
             f"  ?n0 a schema:{local_name(pattern.start_type)} ."]
    for i, step in enumerate(pattern.steps):
        target = f"?{pattern.terminal}" if i == len(pattern.steps) - 1 else f"?n{i + 1}"
        lines.append(f"  ?n{i} schema:{local_name(step)} {target} .")
    lines.append(f"}} ORDER BY ?{pattern.terminal}")
    return "\n".join(lines)


def build_value_query(modifier: Modifier, kg: KnowledgeGraph | None = None) -> Pattern:
    """Compile a modifier path into a graph pattern.

    With a knowledge graph, every property must be known to the vocabulary and
    every type segment must fall inside its property's range; misses only warn.
    """
    start, props, hops = split_path(modifier.name)
    if kg is not None:
        for prop, type_seg in hops:
            prop_iri = schema_iri(prop)
            if not kg.is_known_property(prop_iri):
                warnings.warn(f"unknown property {prop!r} in {modifier.name}", IntentGenWarning, stacklevel=2)
                continue
            if type_seg is None:
                continue
            ranges = kg.ranges(prop_iri)
            if ranges and not kg.superclasses(schema_iri(type_seg)) & set(ranges):
                warnings.warn(f"{type_seg} is outside the range of {prop!r} in {modifier.name}",
                              IntentGenWarning, stacklevel=2)
    pattern = Pattern(schema_iri(start), tuple(schema_iri(p) for p in props))
    return Pattern(pattern.start_type, pattern.steps, rendering=render_sparql(pattern))


class SlotPopulator:
    """Harvests slot vocabularies from an (entailed) knowledge graph.

    ``graph_name`` restricts every query to one named graph; ``None`` queries
    the union of all graphs.
    """

    def __init__(self, kg: KnowledgeGraph, graph_name: str | None = None):
        self.kg = kg
        self.graph_name = graph_name
        self._cache: dict[str, EntityVocabulary] = {}

    def _labels(self, node: str, predicate: str) -> list[str]:
        return [str(o) for o in self.kg.objects(node, predicate, self.graph_name)
                if isinstance(o, Literal)]

    def populate(self, modifier: Modifier) -> EntityVocabulary:
        if modifier.name in self._cache:
            return self._cache[modifier.name]
        vocab = EntityVocabulary(modifier.name)
        if is_datatype(modifier.value_type) and modifier.value_type not in TEXT_TYPES:
            self._cache[modifier.name] = vocab
            return vocab

        pattern = build_value_query(modifier, self.kg)
        last_is_name = pattern.steps[-1] == NAME
        found: list[tuple[str, list[str]]] = []
        for host, leaf in self.kg.path_bindings(pattern, self.graph_name):
            if isinstance(leaf, Literal):
                alternates = self._labels(host, ALTERNATE_NAME) if last_is_name else []
                found.append((leaf.lexical_form, alternates))
                continue
            names = self._labels(leaf, NAME)
            if not names:
                warnings.warn(f"{leaf} has no schema:name; skipped for {modifier.name}",
                              IntentGenWarning, stacklevel=2)
                continue
            alternates = self._labels(leaf, ALTERNATE_NAME)
            found.extend((n, alternates) for n in names)

        merged: dict[str, EntityEntry] = {}
        for value, alternates in sorted(found):
            key = value.casefold()
            entry = merged.get(key)
            if entry is None:
                entry = merged[key] = EntityEntry(value, [value])
            for alt in alternates:
                if alt.casefold() not in {s.casefold() for s in entry.synonyms}:
                    entry.synonyms.append(alt)
        for entry in merged.values():
            entry.synonyms = [entry.value] + sorted(entry.synonyms[1:])
        vocab.values = sorted(merged.values(), key=lambda e: e.value)
        self._cache[modifier.name] = vocab
        return vocab

    def sample_values(self, modifier: Modifier, k: int, seed: int, start_offset: int = 0) -> list[str]:
        """Up to ``k`` surface values for ``modifier``.

        Entity slots sample their vocabulary without replacement.  Datatype
        slots and empty vocabularies get synthesized placeholders; dates step
        one day at a time from 27.05.2018 shifted by ``start_offset`` days.
        """
        if k < 1:
            raise ValueError("k must be at least 1")
        vtype = modifier.value_type
        if vtype in DATE_TYPES:
            return [(PLACEHOLDER_EPOCH + _dt.timedelta(days=start_offset + i)).strftime("%d.%m.%Y")
                    for i in range(k)]
        if vtype in TIME_TYPES:
            return [f"{(10 + start_offset + i) % 24:02d}:00" for i in range(k)]
        if vtype in NUMBER_TYPES:
            return [str(2 * (i + 1)) for i in range(k)]
        if vtype in BOOLEAN_TYPES:
            return ["true", "false"][:k]
        values = self.populate(modifier).canonical_values
        if not values:
            return ["{" + modifier.name + "}"]
        return random.Random(seed).sample(values, min(k, len(values)))
