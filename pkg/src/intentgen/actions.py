"""Parse schema.org Action nodes and turn them into intents.

An action is read into an :class:`ActionDescription` (action type, object
types, result types, input and output parameters).  Input parameters are the
``<property>-input`` edges anywhere below the action's object and result
nodes; their names are dotted paths made of the type of each typed node and
the property descended through, e.g.
``HotelRoom.containedInPlace.Hotel.amenityFeature.name``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import IntentGenWarning, NotAnActionError, UntypedHostError
from .kg import (
    BOOLEAN,
    RDF_TYPE,
    SCHEMA,
    TEXT,
    Graph,
    KnowledgeGraph,
    Literal,
    local_name,
)
from .model import Intent, Modifier

ACTION = SCHEMA + "Action"
OBJECT = SCHEMA + "object"
RESULT = SCHEMA + "result"

# Properties whose values name an entity rather than describe it.
LABEL_PROPERTIES = frozenset({"name", "alternateName"})


@dataclass(frozen=True)
class ValueSpec:
    required: bool = False
    value_name: str | None = None
    expected_datatype: str = TEXT
    multiple: bool = False


@dataclass(frozen=True)
class InputParam:
    path: str
    spec: ValueSpec


@dataclass(frozen=True)
class ActionDescription:
    action_type: str
    object_types: frozenset[str]
    result_types: frozenset[str]
    inputs: tuple[InputParam, ...]
    outputs: tuple[str, ...]


def most_specific(kg: KnowledgeGraph, types) -> list[str]:
    """Drop every type that is a strict superclass of another one; sorted."""
    types = set(types)
    keep = [t for t in types
            if not any(o != t and t in kg.superclasses(o) for o in types)]
    return sorted(keep)


def _asserted_types(graph: Graph, node: str) -> list[str]:
    return [o for p, o in graph.edges(node, asserted_only=True)
            if p == RDF_TYPE and isinstance(o, str)]


def find_actions(kg: KnowledgeGraph, graph_name: str | None = None) -> list[tuple[str, str]]:
    """All (graph name, node) pairs whose asserted type is an Action subclass."""
    names = [graph_name] if graph_name else kg.graph_names()
    found = []
    for name in names:
        g = kg.graph(name)
        nodes = {s for s, p, o in g
                 if p == RDF_TYPE and g.is_asserted((s, p, o)) and isinstance(o, str)
                 and kg.is_subclass(o, ACTION)}
        found.extend((name, n) for n in sorted(nodes))
    return found


def parse_action(kg: KnowledgeGraph, node: str, graph_name: str) -> ActionDescription:
    graph = kg.graph(graph_name)
    action_types = [t for t in kg.types(node, graph_name) if kg.is_subclass(t, ACTION)]
    if not action_types:
        raise NotAnActionError(f"{node} is not typed as a schema:Action")
    action_type = most_specific(kg, action_types)[0]

    edges = graph.edges(node, asserted_only=True)
    objects = [o for p, o in edges if p == OBJECT and isinstance(o, str)]
    results = [o for p, o in edges if p == RESULT and isinstance(o, str)]
    if not objects:
        raise NotAnActionError(f"action {node} has no schema:object")

    object_types: set[str] = set()
    for o in objects:
        object_types.update(most_specific(kg, _asserted_types(graph, o)))
    result_types: set[str] = set()
    for r in results:
        result_types.update(most_specific(kg, _asserted_types(graph, r)))
    if not object_types:
        raise UntypedHostError(f"the object of {node} has no type")

    walker = _ParameterWalker(kg, graph)
    for root in objects + results:
        walker.walk_root(root)

    paths = [p.path for p in walker.inputs]
    if len(set(paths)) != len(paths):
        dupes = sorted({p for p in paths if paths.count(p) > 1})
        raise ValueError(f"duplicate input parameter paths: {dupes}")

    return ActionDescription(
        action_type=action_type,
        object_types=frozenset(object_types),
        result_types=frozenset(result_types),
        inputs=tuple(walker.inputs),
        outputs=tuple(walker.outputs),
    )


class _ParameterWalker:
    def __init__(self, kg: KnowledgeGraph, graph: Graph):
        self.kg = kg
        self.graph = graph
        self.inputs: list[InputParam] = []
        self.outputs: list[str] = []

    def _type_name(self, node: str) -> str | None:
        types = most_specific(self.kg, _asserted_types(self.graph, node))
        return local_name(types[0]) if types else None

    def walk_root(self, root: str):
        type_name = self._type_name(root)
        prefix = [type_name] if type_name else []
        self._walk(root, prefix, type_name, None, {root})

    def _walk(self, node, prefix, host_type, incoming, visited):
        for pred, obj in self.graph.edges(node, asserted_only=True):
            if pred == RDF_TYPE:
                continue
            name = local_name(pred)
            for suffix, sink in (("-input", self.inputs), ("-output", self.outputs)):
                if name.endswith(suffix):
                    prop = name[: -len(suffix)]
                    if not prefix:
                        raise UntypedHostError(
                            f"cannot name parameter {prop!r}: its host node {node} has no type")
                    path = ".".join(prefix + [prop])
                    if sink is self.inputs:
                        spec = self._value_spec(obj, prop, host_type, incoming)
                        sink.append(InputParam(path, spec))
                    else:
                        sink.append(path)
                    break
            else:
                if isinstance(obj, str) and obj not in visited:
                    child_type = self._type_name(obj)
                    child_prefix = prefix + [name] + ([child_type] if child_type else [])
                    self._walk(obj, child_prefix, child_type, name, visited | {obj})

    def _value_spec(self, value, prop, host_type, incoming) -> ValueSpec:
        expected = self._expected_type(prop, host_type, incoming)
        if isinstance(value, Literal):
            if value.datatype == BOOLEAN:
                return ValueSpec(required=value.lexical_form == "true", expected_datatype=expected)
            return _parse_shorthand(value.lexical_form, expected)
        g = self.graph

        def first(p):
            vals = g.objects(value, SCHEMA + p)
            return str(vals[0]) if vals else None

        return ValueSpec(
            required=first("valueRequired") == "true",
            value_name=first("valueName"),
            expected_datatype=expected,
            multiple=first("multipleValues") == "true",
        )

    def _expected_type(self, prop, host_type, incoming) -> str:
        # A label property names an instance of the host's class.  An untyped
        # host is named after the property that leads to it
        # (amenityFeature -> AmenityFeature).
        if prop in LABEL_PROPERTIES:
            if host_type:
                return SCHEMA + host_type
            if incoming:
                return SCHEMA + incoming[0].upper() + incoming[1:]
        ranges = self.kg.ranges(SCHEMA + prop)
        return ranges[0] if ranges else TEXT


def _parse_shorthand(text: str, expected: str) -> ValueSpec:
    """Parse the ``-input`` text form, e.g. ``"required name=q"``."""
    required = multiple = False
    value_name = None
    for token in text.split():
        if token == "required":
            required = True
        elif token == "multiple":
            multiple = True
        elif token.startswith("name="):
            value_name = token[len("name="):]
    return ValueSpec(required, value_name, expected, multiple)


def act_name(action_type: str) -> str:
    """``SearchAction`` -> ``search``; the bare ``Action`` type yields ``""``."""
    name = local_name(action_type)
    if name.endswith("Action"):
        name = name[: -len("Action")]
    return name.lower()


def extract_intent(action: ActionDescription) -> Intent:
    act = act_name(action.action_type)
    if not act:
        warnings.warn(
            f"{local_name(action.action_type)} has no verb; using act 'perform'",
            IntentGenWarning, stacklevel=2)
        act = "perform"
    modifiers = [Modifier(p.path, p.spec.expected_datatype, p.spec.required) for p in action.inputs]
    return Intent(
        act=act,
        object_types=sorted(local_name(t) for t in action.object_types),
        sentences=[],
        modifiers=modifiers,
    )
