"""Agent bundle export in a DialogFlow-v1-style directory layout.

::

    <out>/agent.json
    <out>/intents/<act>.<Type0>-<Type1>.json
    <out>/entities/<EntityName>.json

Every file is two-space indented UTF-8 JSON with keys in a fixed order and a
trailing newline, so identical inputs give byte-identical bundles.
"""

from __future__ import annotations

import json
import os
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import ExportCollisionError, IntentGenWarning, InputError
from .kg import SCHEMA, local_name, schema_iri
from .model import AnnotatedSentence, Intent, Modifier, SlotSpan, dump_json
from .sentences import tokenize_type_name
from .slots import EntityEntry, EntityVocabulary

BUNDLE_FORMAT = "intentgen-dialogflow-v1"

SYSTEM_TYPES = {
    SCHEMA + "Date": "@sys.date",
    SCHEMA + "DateTime": "@sys.date-time",
    SCHEMA + "Time": "@sys.time",
    SCHEMA + "Number": "@sys.number",
    SCHEMA + "Integer": "@sys.number",
    SCHEMA + "Float": "@sys.number",
    SCHEMA + "Text": "@sys.any",
    SCHEMA + "Boolean": "@sys.any",
}


@dataclass(frozen=True)
class DataTypeMapping:
    entity_type: str  # "@sys.date" or "@AmenityFeature"
    custom: str | None = None  # name of the custom entity type, if any
    note: str | None = None


def intent_name(intent: Intent) -> str:
    return f"{intent.act}." + "-".join(intent.object_types)


def slot_name(modifier: Modifier) -> str:
    return "object." + modifier.name


def map_datatype(schema_type: str) -> DataTypeMapping:
    iri = schema_iri(schema_type)
    if iri in SYSTEM_TYPES:
        note = "boolean: expects true or false" if local_name(iri) == "Boolean" else None
        return DataTypeMapping(SYSTEM_TYPES[iri], None, note)
    name = local_name(iri)
    return DataTypeMapping("@" + name, name)


def prompt_for(modifier: Modifier) -> str:
    return f"What is the {tokenize_type_name(modifier.segments[-1])}?"


def _parameter(modifier: Modifier) -> dict:
    mapping = map_datatype(modifier.value_type)
    param = {
        "name": slot_name(modifier),
        "dataType": mapping.entity_type,
        "value": "$" + slot_name(modifier),
        "required": modifier.required,
        "prompts": [{"lang": "en", "value": prompt_for(modifier)}],
        "schemaType": local_name(modifier.value_type),
    }
    if mapping.note:
        param["note"] = mapping.note
    return param


def _phrase(sentence: AnnotatedSentence, params: Mapping[str, dict]) -> dict:
    parts, cursor = [], 0
    for span in sorted(sentence.spans, key=lambda s: s.start):
        if span.start > cursor:
            parts.append({"text": sentence.text[cursor:span.start]})
        name = "object." + span.modifier
        parts.append({"text": sentence.text[span.start:span.end], "alias": name,
                      "meta": params[name]["dataType"], "userDefined": True})
        cursor = span.end
    if cursor < len(sentence.text):
        parts.append({"text": sentence.text[cursor:]})
    return {"data": parts, "isTemplate": False}


def intent_document(intent: Intent) -> dict:
    params = {slot_name(m): _parameter(m) for m in intent.modifiers}
    return {
        "name": intent_name(intent),
        "auto": True,
        "parameters": list(params.values()),
        "trainingPhrases": [_phrase(s, params) for s in intent.sentences],
    }


def entity_document(name: str, entries: Sequence[EntityEntry]) -> dict:
    return {
        "name": name,
        "isEnum": False,
        "automatedExpansion": False,
        "entries": [{"value": e.value, "synonyms": list(e.synonyms)} for e in entries],
    }


def bundle_documents(intents: Sequence[Intent], vocabularies: Mapping[str, EntityVocabulary],
                     agent_name: str = "intentgen", language: str = "en") -> dict[str, dict]:
    """Relative path -> JSON document for the whole bundle."""
    docs: dict[str, dict] = {}
    intents = sorted(intents, key=intent_name)
    names = [intent_name(i) for i in intents]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ExportCollisionError(f"two intents share the name {dupes[0]}")

    entities: dict[str, dict[str, EntityEntry]] = {}
    for intent in intents:
        for m in intent.modifiers:
            mapping = map_datatype(m.value_type)
            if mapping.custom is None:
                continue
            merged = entities.setdefault(mapping.custom, {})
            vocab = vocabularies.get(m.name)
            for entry in vocab.values if vocab else []:
                key = entry.value.casefold()
                if key not in merged:
                    merged[key] = EntityEntry(entry.value, list(entry.synonyms))
                else:
                    have = {s.casefold() for s in merged[key].synonyms}
                    merged[key].synonyms.extend(s for s in entry.synonyms if s.casefold() not in have)

    docs["agent.json"] = {
        "format": BUNDLE_FORMAT,
        "name": agent_name,
        "language": language,
        "isDefault": True,
        "intents": names,
        "entities": sorted(entities),
    }
    for intent in intents:
        docs[f"intents/{intent_name(intent)}.json"] = intent_document(intent)
    for name in sorted(entities):
        entries = sorted(entities[name].values(), key=lambda e: e.value)
        if not entries:
            warnings.warn(f"entity type {name} has no entries", IntentGenWarning, stacklevel=2)
        docs[f"entities/{name}.json"] = entity_document(name, entries)
    return docs


def export_agent(intents: Sequence[Intent], vocabularies: Mapping[str, EntityVocabulary], out_dir,
                 force: bool = False, agent_name: str = "intentgen") -> list[str]:
    """Write the bundle and return the relative paths written.

    An existing file with different content is an error unless ``force``;
    nothing is written in that case.
    """
    out_dir = os.fspath(out_dir)
    if not intents:
        warnings.warn("no intents to export; writing agent.json only", IntentGenWarning, stacklevel=2)
    rendered = {path: dump_json(doc) for path, doc in bundle_documents(intents, vocabularies, agent_name).items()}
    if not force:
        for path, text in rendered.items():
            target = os.path.join(out_dir, path)
            if os.path.exists(target):
                with open(target, encoding="utf-8") as fh:
                    if fh.read() != text:
                        raise ExportCollisionError(
                            f"{target} exists with different content (use --force to overwrite)")
    for path, text in rendered.items():
        target = os.path.join(out_dir, path)
        os.makedirs(os.path.dirname(target), exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return list(rendered)


@dataclass
class AgentBundle:
    name: str
    language: str
    intents: list[Intent]
    entities: dict[str, list[EntityEntry]]


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def read_agent(out_dir) -> AgentBundle:
    """Parse a bundle written by :func:`export_agent` back into intents."""
    out_dir = os.fspath(out_dir)
    agent = _read_json(os.path.join(out_dir, "agent.json"))
    intents = []
    for name in agent["intents"]:
        doc = _read_json(os.path.join(out_dir, "intents", f"{name}.json"))
        act, _, types = doc["name"].partition(".")
        modifiers = [Modifier(p["name"][len("object."):], schema_iri(p["schemaType"]), p["required"])
                     for p in doc["parameters"]]
        sentences = []
        for phrase in doc["trainingPhrases"]:
            text, spans = "", []
            for part in phrase["data"]:
                if "alias" in part:
                    spans.append(SlotSpan(len(text), len(text) + len(part["text"]),
                                          part["alias"][len("object."):], part["text"]))
                text += part["text"]
            sentences.append(AnnotatedSentence(text, tuple(spans)))
        intents.append(Intent(act, types.split("-") if types else [], sentences, modifiers))
    entities = {}
    for name in agent["entities"]:
        doc = _read_json(os.path.join(out_dir, "entities", f"{name}.json"))
        entities[name] = [EntityEntry(e["value"], list(e["synonyms"])) for e in doc["entries"]]
    return AgentBundle(agent["name"], agent["language"], intents, entities)
