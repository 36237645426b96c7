"""Intent, Modifier and AnnotatedSentence, with their canonical JSON forms."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .kg import local_name, schema_iri


@dataclass(frozen=True)
class Modifier:
    """A slot of an intent: dotted path name, expected value type, required flag."""

    name: str
    value_type: str
    required: bool = False

    @property
    def segments(self) -> list[str]:
        return self.name.split(".")


@dataclass(frozen=True)
class SlotSpan:
    start: int
    end: int
    modifier: str
    value: str

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "modifier": self.modifier, "value": self.value}


@dataclass(frozen=True)
class AnnotatedSentence:
    text: str
    spans: tuple[SlotSpan, ...] = ()

    def to_dict(self) -> dict:
        return {"text": self.text, "spans": [s.to_dict() for s in self.spans]}

    @classmethod
    def from_dict(cls, data: dict) -> "AnnotatedSentence":
        spans = tuple(SlotSpan(s["start"], s["end"], s["modifier"], s["value"]) for s in data["spans"])
        return cls(data["text"], spans)


@dataclass
class Intent:
    act: str
    object_types: list[str]
    sentences: list[AnnotatedSentence] = field(default_factory=list)
    modifiers: list[Modifier] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "act": self.act,
            "objectTypes": list(self.object_types),
            "modifiers": [
                {"name": m.name, "valueType": local_name(m.value_type), "required": m.required}
                for m in self.modifiers
            ],
            "sentences": [s.to_dict() for s in self.sentences],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Intent":
        return cls(
            act=data["act"],
            object_types=list(data["objectTypes"]),
            sentences=[AnnotatedSentence.from_dict(s) for s in data["sentences"]],
            modifiers=[Modifier(m["name"], schema_iri(m["valueType"]), m["required"])
                       for m in data["modifiers"]],
        )


def dump_json(data) -> str:
    """Two-space indented UTF-8 JSON with a trailing newline."""
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def canonical_json(intent: Intent) -> str:
    return dump_json(intent.to_dict())
