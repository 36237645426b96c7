"""In-memory triple store with named graphs.

Holds schema.org annotations ingested from a JSON-LD subset and the
schema.org vocabulary (loaded from line-based triples).  Entailment is a
naive forward-chaining loop over four rules:

* subClassOf transitivity
* type inheritance along subClassOf
* subPropertyOf propagation
* inverseOf, applied in both directions

IRIs and blank nodes are plain strings (blank nodes start with ``_:``);
literals are :class:`Literal` instances.
"""

from __future__ import annotations

import datetime as _dt
import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Union

from .errors import (
    GraphNotFoundError,
    JsonLdParseError,
    StructureError,
    UnsupportedContextError,
    VocabularyParseError,
)

SCHEMA = "http://schema.org/"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"

RDF_TYPE = RDF + "type"
RDF_PROPERTY = RDF + "Property"
RDFS_CLASS = RDFS + "Class"
RDFS_SUBCLASSOF = RDFS + "subClassOf"
RDFS_SUBPROPERTYOF = RDFS + "subPropertyOf"
RDFS_COMMENT = RDFS + "comment"
RDFS_DOMAIN = RDFS + "domain"
RDFS_RANGE = RDFS + "range"
SCHEMA_INVERSEOF = SCHEMA + "inverseOf"
SCHEMA_DOMAININCLUDES = SCHEMA + "domainIncludes"
SCHEMA_RANGEINCLUDES = SCHEMA + "rangeIncludes"
OWL_INVERSEOF = OWL + "inverseOf"

TEXT = SCHEMA + "Text"
DATE = SCHEMA + "Date"
NUMBER = SCHEMA + "Number"
BOOLEAN = SCHEMA + "Boolean"

VOCABULARY_GRAPH = "urn:intentgen:vocabulary"

SUPPORTED_CONTEXTS = frozenset({
    "http://schema.org", "http://schema.org/",
    "https://schema.org", "https://schema.org/",
})

INVERSE_PREDICATES = (SCHEMA_INVERSEOF, OWL_INVERSEOF)
RANGE_PREDICATES = (RDFS_RANGE, SCHEMA_RANGEINCLUDES)
DOMAIN_PREDICATES = (RDFS_DOMAIN, SCHEMA_DOMAININCLUDES)


@dataclass(frozen=True, order=True)
class Literal:
    lexical_form: str
    datatype: str = TEXT

    def __str__(self):
        return self.lexical_form


Term = Union[str, Literal]


class Triple(NamedTuple):
    subject: str
    predicate: str
    object: Term
    graph: str | None = None


@dataclass(frozen=True)
class Pattern:
    """A chain of property hops starting at every instance of a class."""

    start_type: str
    steps: tuple[str, ...]
    terminal: str = "value"
    rendering: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.steps:
            raise ValueError("pattern needs at least one property step")


@dataclass
class IngestReport:
    graph: str
    triple_count: int
    roots: list[str]


def schema_iri(term: str) -> str:
    """Expand a schema.org term (``Hotel``, ``schema:Hotel`` or a full IRI)."""
    if term.startswith("schema:"):
        return SCHEMA + term[len("schema:"):]
    if term.startswith("https://schema.org/"):
        return SCHEMA + term[len("https://schema.org/"):]
    if "://" in term or term.startswith("_:") or term.startswith("urn:"):
        return term
    return SCHEMA + term


def local_name(iri: str) -> str:
    for sep in ("#", "/", ":"):
        if sep in iri:
            iri = iri.rsplit(sep, 1)[1]
    return iri


_ISO_DATE = re.compile(r"^(\d{4})-(\d{2})-(\d{2})$")
_DOTTED_DATE = re.compile(r"^(\d{2})\.(\d{2})\.(\d{4})$")


def normalize_date(text: str) -> str | None:
    """Return the ISO-8601 form of an ISO or ``DD.MM.YYYY`` date, else None."""
    m = _ISO_DATE.match(text)
    if m:
        y, mo, d = m.groups()
    else:
        m = _DOTTED_DATE.match(text)
        if not m:
            return None
        d, mo, y = m.groups()
    try:
        return _dt.date(int(y), int(mo), int(d)).isoformat()
    except ValueError:
        return None


def term_key(term: Term) -> tuple[str, int]:
    """Sort key: string form first, IRIs before literals on ties."""
    return (str(term), isinstance(term, Literal))


class Graph:
    """One named graph; keeps insertion order for document-order traversal."""

    def __init__(self, name: str):
        self.name = name
        self._triples: dict[tuple[str, str, Term], int] = {}
        self._asserted: set[tuple[str, str, Term]] = set()
        self._spo: dict[str, dict[str, dict[Term, None]]] = {}
        self._pos: dict[str, dict[Term, dict[str, None]]] = {}
        self.derived_count = 0
        self._bnode_counter = 0

    def __len__(self):
        return len(self._triples)

    def __contains__(self, spo):
        return spo in self._triples

    def __iter__(self) -> Iterator[tuple[str, str, Term]]:
        return iter(self._triples)

    @property
    def asserted_count(self) -> int:
        return len(self._asserted)

    def is_asserted(self, spo) -> bool:
        return spo in self._asserted

    def add(self, s: str, p: str, o: Term, derived: bool = False) -> bool:
        key = (s, p, o)
        if key in self._triples:
            return False
        self._triples[key] = len(self._triples)
        if derived:
            self.derived_count += 1
        else:
            self._asserted.add(key)
        self._spo.setdefault(s, {}).setdefault(p, {})[o] = None
        self._pos.setdefault(p, {}).setdefault(o, {})[s] = None
        return True

    def objects(self, s: str, p: str) -> list[Term]:
        return list(self._spo.get(s, {}).get(p, ()))

    def subjects(self, p: str, o: Term) -> list[str]:
        return list(self._pos.get(p, {}).get(o, ()))

    def edges(self, s: str, asserted_only: bool = False) -> list[tuple[str, Term]]:
        """Outgoing (predicate, object) pairs of ``s`` in insertion order."""
        out = []
        for p, objs in self._spo.get(s, {}).items():
            for o in objs:
                if asserted_only and (s, p, o) not in self._asserted:
                    continue
                out.append((p, o))
        if asserted_only:
            out.sort(key=lambda po: self._triples[(s, po[0], po[1])])
        return out

    def new_blank_node(self) -> str:
        node = f"_:g{self.name}_n{self._bnode_counter}"
        self._bnode_counter += 1
        return node


class KnowledgeGraph:
    """A set of named graphs plus a reserved vocabulary graph.

    Building (ingest, load_vocabulary, apply_entailment) must happen from a
    single thread; afterwards the store is only read.
    """

    def __init__(self):
        self._graphs: dict[str, Graph] = {VOCABULARY_GRAPH: Graph(VOCABULARY_GRAPH)}
        self._closure_cache: dict[tuple[str, str], frozenset[str]] = {}

    # -- graph access -----------------------------------------------------

    @property
    def vocabulary(self) -> Graph:
        return self._graphs[VOCABULARY_GRAPH]

    def graph(self, name: str) -> Graph:
        try:
            return self._graphs[name]
        except KeyError:
            raise GraphNotFoundError(name) from None

    def graph_names(self) -> list[str]:
        return [n for n in self._graphs if n != VOCABULARY_GRAPH]

    def create_graph(self, name: str) -> Graph:
        """Return the named graph, creating it empty if needed."""
        return self._ensure(name)

    def _ensure(self, name: str) -> Graph:
        if name not in self._graphs:
            self._graphs[name] = Graph(name)
        return self._graphs[name]

    def _views(self, graph_name: str | None) -> list[Graph]:
        if graph_name is None:
            return list(self._graphs.values())
        return [self.graph(graph_name)]

    def add(self, s: str, p: str, o: Term, graph_name: str) -> bool:
        """Assert one triple; returns False if it was already present."""
        if p == RDFS_SUBCLASSOF or p == RDFS_SUBPROPERTYOF:
            self._closure_cache.clear()
        return self._ensure(graph_name).add(s, p, o)

    def triples(self, graph_name: str | None = None) -> Iterator[Triple]:
        for g in self._views(graph_name):
            for s, p, o in g:
                yield Triple(s, p, o, g.name)

    def objects(self, s: str, p: str, graph_name: str | None = None) -> list[Term]:
        seen: dict[Term, None] = {}
        for g in self._views(graph_name):
            for o in g.objects(s, p):
                seen[o] = None
        return list(seen)

    def subjects(self, p: str, o: Term, graph_name: str | None = None) -> list[str]:
        seen: dict[str, None] = {}
        for g in self._views(graph_name):
            for s in g.subjects(p, o):
                seen[s] = None
        return list(seen)

    def types(self, node: str, graph_name: str | None = None) -> list[str]:
        return [t for t in self.objects(node, RDF_TYPE, graph_name) if isinstance(t, str)]

    # -- vocabulary lookups -----------------------------------------------

    def comment(self, term: str) -> str | None:
        for c in self.vocabulary.objects(schema_iri(term), RDFS_COMMENT):
            return str(c)
        return None

    def _closure(self, start: str, predicate: str) -> frozenset[str]:
        key = (start, predicate)
        cached = self._closure_cache.get(key)
        if cached is not None:
            return cached
        seen = {start}
        stack = [start]
        while stack:
            cur = stack.pop()
            for g in self._graphs.values():
                for sup in g.objects(cur, predicate):
                    if isinstance(sup, str) and sup not in seen:
                        seen.add(sup)
                        stack.append(sup)
        result = frozenset(seen)
        self._closure_cache[key] = result
        return result

    def superclasses(self, cls: str) -> frozenset[str]:
        """Reflexive-transitive superclasses of ``cls`` across all graphs."""
        return self._closure(cls, RDFS_SUBCLASSOF)

    def is_subclass(self, cls: str, ancestor: str) -> bool:
        return ancestor in self.superclasses(cls)

    def is_known_class(self, iri: str) -> bool:
        v = self.vocabulary
        return bool(v.objects(iri, RDFS_SUBCLASSOF) or v.subjects(RDFS_SUBCLASSOF, iri)
                    or RDFS_CLASS in v.objects(iri, RDF_TYPE))

    def is_known_property(self, iri: str) -> bool:
        v = self.vocabulary
        if RDF_PROPERTY in v.objects(iri, RDF_TYPE):
            return True
        preds = (RDFS_SUBPROPERTYOF, *INVERSE_PREDICATES, *DOMAIN_PREDICATES, *RANGE_PREDICATES)
        return any(v.objects(iri, p) for p in preds)

    def ranges(self, prop: str) -> list[str]:
        out: list[str] = []
        for p in RANGE_PREDICATES:
            out.extend(r for r in self.vocabulary.objects(prop, p) if isinstance(r, str))
        return out

    # -- JSON-LD ingestion ------------------------------------------------

    def ingest_jsonld(self, document: str | bytes, graph_name: str) -> IngestReport:
        """Ingest a schema.org JSON-LD document into ``graph_name``.

        Supports an inline schema.org ``@context`` string, ``@type`` (string
        or array), ``@id``, ``@graph``, ``@value`` objects, nesting and
        arrays.  Nested objects without ``@id`` become blank nodes.
        """
        if isinstance(document, bytes):
            document = document.decode("utf-8")
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            offset = len(document[:exc.pos].encode("utf-8"))
            raise JsonLdParseError(exc.msg, offset) from None

        graph = self._ensure(graph_name)
        before = len(graph)
        ingester = _JsonLdIngester(self, graph)
        roots = ingester.ingest(data)
        self._closure_cache.clear()
        return IngestReport(graph_name, len(graph) - before, roots)

    # -- vocabulary -------------------------------------------------------

    def load_vocabulary(self, path) -> tuple[int, int]:
        """Load ``<s> <p> <o> .`` lines into the vocabulary graph.

        Returns (class count, property count) for the file: classes are the
        distinct subjects typed rdfs:Class or carrying a subClassOf edge;
        properties are the distinct subjects typed rdf:Property or carrying a
        subPropertyOf, inverseOf, domain or range edge.
        """
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        parsed = parse_ntriples(text)
        classes: set[str] = set()
        properties: set[str] = set()
        prop_preds = {RDFS_SUBPROPERTYOF, *INVERSE_PREDICATES, *DOMAIN_PREDICATES, *RANGE_PREDICATES}
        for s, p, o in parsed:
            self.add(s, p, o, VOCABULARY_GRAPH)
            if p == RDFS_SUBCLASSOF or (p == RDF_TYPE and o == RDFS_CLASS):
                classes.add(s)
            elif p in prop_preds or (p == RDF_TYPE and o == RDF_PROPERTY):
                properties.add(s)
        return len(classes), len(properties)

    # -- entailment -------------------------------------------------------

    def apply_entailment(self, graph_name: str) -> int:
        """Materialize entailed triples into ``graph_name``; returns how many.

        The vocabulary graph is closed first, so derivations that follow from
        the vocabulary alone live there rather than in every data graph.
        """
        graph = self.graph(graph_name)
        if graph_name != VOCABULARY_GRAPH:
            self._saturate(self.vocabulary)
        return self._saturate(graph)

    def _saturate(self, graph: Graph) -> int:
        vocab = self.vocabulary
        added = 0
        while True:
            new = []
            inverses = self._inverse_map()
            for s, p, o in list(graph):
                for d in self._consequences(s, p, o, inverses):
                    if d in graph or (graph is not vocab and d in vocab):
                        continue
                    new.append(d)
            fresh = 0
            for s, p, o in new:
                if graph.add(s, p, o, derived=True):
                    fresh += 1
                    if p in (RDFS_SUBCLASSOF, RDFS_SUBPROPERTYOF):
                        self._closure_cache.clear()
            added += fresh
            if not fresh:
                return added

    def _inverse_map(self) -> dict[str, set[str]]:
        inv: dict[str, set[str]] = {}
        for g in self._graphs.values():
            for pred in INVERSE_PREDICATES:
                for p, objs in g._pos.get(pred, {}).items():
                    for q in objs:
                        if isinstance(p, str):
                            inv.setdefault(q, set()).add(p)
                            inv.setdefault(p, set()).add(q)
        return inv

    def _consequences(self, s, p, o, inverses) -> Iterable[tuple[str, str, Term]]:
        if p == RDFS_SUBCLASSOF and isinstance(o, str):
            for sup in self.superclasses(o):
                if sup != s:
                    yield (s, RDFS_SUBCLASSOF, sup)
        if p == RDF_TYPE and isinstance(o, str):
            for sup in self.superclasses(o):
                yield (s, RDF_TYPE, sup)
        for q in self._closure(p, RDFS_SUBPROPERTYOF):
            if q != p:
                yield (s, q, o)
        if not isinstance(o, Literal):
            for q in inverses.get(p, ()):
                yield (o, q, s)

    # -- querying ---------------------------------------------------------

    def path_bindings(self, pattern: Pattern, graph_name: str | None = None) -> list[tuple[str, Term]]:
        """Return (host node, leaf) pairs for every match of ``pattern``."""
        frontier = sorted(self.subjects(RDF_TYPE, pattern.start_type, graph_name))
        for step in pattern.steps[:-1]:
            nxt: dict[str, None] = {}
            for node in frontier:
                for o in self.objects(node, step, graph_name):
                    if isinstance(o, str):
                        nxt[o] = None
            frontier = list(nxt)
        last = pattern.steps[-1]
        pairs: dict[tuple[str, Term], None] = {}
        for node in frontier:
            for o in self.objects(node, last, graph_name):
                pairs[(node, o)] = None
        return sorted(pairs, key=lambda hl: (term_key(hl[1]), hl[0]))

    def query_path(self, pattern: Pattern, graph_name: str | None = None) -> list[Term]:
        """Distinct leaf values reached by ``pattern``, sorted by string form."""
        leaves = {leaf for _, leaf in self.path_bindings(pattern, graph_name)}
        return sorted(leaves, key=term_key)


_NT_LINE = re.compile(
    r'^<([^<>\s]+)>\s+<([^<>\s]+)>\s+'
    r'(?:<([^<>\s]+)>|"((?:[^"\\]|\\.)*)"(?:@[A-Za-z][A-Za-z0-9-]*|\^\^<[^<>\s]+>)?)'
    r'\s*\.\s*$'
)


def parse_ntriples(text: str) -> list[tuple[str, str, Term]]:
    """Parse line-based triples; string literals only, one triple per line."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _NT_LINE.match(stripped)
        if not m:
            raise VocabularyParseError(f"cannot parse triple: {stripped[:60]!r}", lineno)
        s, p, o_iri, o_lit = m.groups()
        if o_iri is not None:
            obj: Term = schema_iri(o_iri)
        else:
            try:
                obj = Literal(json.loads(f'"{o_lit}"'))
            except json.JSONDecodeError:
                raise VocabularyParseError("bad escape in literal", lineno) from None
        out.append((schema_iri(s), schema_iri(p), obj))
    return out


class _JsonLdIngester:
    def __init__(self, kg: KnowledgeGraph, graph: Graph):
        self.kg = kg
        self.graph = graph
        self.labels: dict[str, str] = {}

    def ingest(self, data) -> list[str]:
        if isinstance(data, list):
            items = [(item, f"$[{i}]") for i, item in enumerate(data)]
            if not items:
                return []
            self._check_context(items[0][0], "$[0]", required=True)
        elif isinstance(data, dict):
            self._check_context(data, "$", required=True)
            if "@graph" in data:
                graph_items = data["@graph"]
                if not isinstance(graph_items, list):
                    graph_items = [graph_items]
                items = [(item, f"$.@graph[{i}]") for i, item in enumerate(graph_items)]
            else:
                items = [(data, "$")]
        else:
            raise StructureError("top level must be an object or array", "$")

        roots = []
        for item, path in items:
            if not isinstance(item, dict):
                raise StructureError("top-level entries must be objects", path)
            node = self._node_id(item)
            self._node_body(item, node, path)
            roots.append(node)
        return roots

    def _check_context(self, obj, path, required=False):
        if not isinstance(obj, dict):
            return
        if "@context" not in obj:
            if required:
                raise UnsupportedContextError(f"missing @context at {path}")
            return
        ctx = obj["@context"]
        if not isinstance(ctx, str) or ctx not in SUPPORTED_CONTEXTS:
            raise UnsupportedContextError(f"unsupported @context {ctx!r} at {path}")

    def _node_id(self, obj: dict) -> str:
        ident = obj.get("@id")
        if ident is None:
            return self.graph.new_blank_node()
        if not isinstance(ident, str):
            raise StructureError("@id must be a string", "@id")
        if ident.startswith("_:"):
            if ident not in self.labels:
                self.labels[ident] = self.graph.new_blank_node()
            return self.labels[ident]
        return schema_iri(ident) if ident.startswith("schema:") else ident

    def _node_body(self, obj: dict, node: str, path: str):
        self._check_context(obj, path)
        types = obj.get("@type", [])
        if isinstance(types, str):
            types = [types]
        if not isinstance(types, list) or not all(isinstance(t, str) for t in types):
            raise StructureError("@type must be a string or array of strings", f"{path}.@type")
        for t in types:
            self.graph.add(node, RDF_TYPE, schema_iri(t))
        for key, value in obj.items():
            if key.startswith("@"):
                if key in ("@context", "@id", "@type", "@graph"):
                    continue
                raise StructureError(f"unsupported keyword {key}", f"{path}.{key}")
            pred = schema_iri(key)
            values = value if isinstance(value, list) else [value]
            for i, v in enumerate(values):
                vpath = f"{path}.{key}[{i}]" if isinstance(value, list) else f"{path}.{key}"
                self._value(node, pred, v, vpath)

    def _value(self, node: str, pred: str, v, path: str):
        if v is None:
            return
        if isinstance(v, list):
            raise StructureError("nested arrays are not supported", path)
        if isinstance(v, dict):
            if "@value" in v:
                self.graph.add(node, pred, self._value_object(v, path))
                return
            if set(v) == {"@id"}:
                self.graph.add(node, pred, self._node_id(v))
                return
            child = self._node_id(v)
            self.graph.add(node, pred, child)
            self._node_body(v, child, path)
            return
        self.graph.add(node, pred, self._literal(v, path))

    def _literal(self, v, path: str) -> Literal:
        if isinstance(v, bool):
            return Literal("true" if v else "false", BOOLEAN)
        if isinstance(v, (int, float)):
            return Literal(str(v), NUMBER)
        if isinstance(v, str):
            iso = normalize_date(v)
            if iso is not None:
                return Literal(iso, DATE)
            return Literal(v, TEXT)
        raise StructureError(f"unsupported value {v!r}", path)

    def _value_object(self, v: dict, path: str) -> Literal:
        raw = v["@value"]
        if "@type" not in v:
            return self._literal(raw, path)
        datatype = schema_iri(v["@type"])
        text = str(raw).lower() if isinstance(raw, bool) else str(raw)
        if datatype == DATE:
            iso = normalize_date(text)
            if iso is None:
                raise StructureError(f"not a date: {text!r}", path)
            text = iso
        return Literal(text, datatype)
