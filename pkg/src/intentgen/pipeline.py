"""End-to-end pipeline: annotations in, agent bundle out.

Stages run in order and each one is tagged in errors and in the run report:
ingest, entail, extract, populate, lexicon, embeddings, expand, generate,
export.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .actions import extract_intent, find_actions, parse_action
from .embeddings import DOMAIN, GENERIC, EmbeddingTable, load_vectors, relevant_words
from .errors import InputError, IntentGenError, IntentGenWarning, OutOfVocabularyError
from .export import export_agent, intent_name
from .grammar import Grammar, load_grammar
from .kg import KnowledgeGraph, local_name
from .lexicon import NOUN, VERB, Lexicon, load_wordnet, normalize_lemma
from .model import Intent
from .sentences import DEFAULT_CAP, build_sentences, tokenize_type_name
from .slots import DATE_TYPES, EntityVocabulary, SlotPopulator, is_datatype

DATA_DIR = Path(__file__).resolve().parent / "data"

STAGES = ("ingest", "entail", "extract", "populate", "lexicon", "embeddings", "expand",
          "generate", "export")


def bundled(name: str) -> str:
    return str(DATA_DIR / name)


DEMO_GRAPHS = ("search_action.jsonld", "hotels.jsonld")


@dataclass
class PipelineConfig:
    graphs: list[str]
    out: str | None = None
    vocab: str = field(default_factory=lambda: bundled("schemaorg-mini.nt"))
    wordnet: str = field(default_factory=lambda: bundled("mini-wordnet"))
    generic_vec: str = field(default_factory=lambda: bundled("toy-generic.vec"))
    domain_vec: str = field(default_factory=lambda: bundled("toy-domain.vec"))
    grammar: str | None = None
    beta: float = 0.5
    cap: int | None = DEFAULT_CAP
    seed: int = 42
    samples: int = 3
    synset_k: int = 2
    force: bool = False
    until: str = "export"  # last stage to run


class PipelineError(IntentGenError):
    """A stage failed.  ``exit_code`` is 1 for bad input, 2 otherwise."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        self.exit_code = 1 if isinstance(cause, (InputError, OSError)) else 2
        super().__init__(f"[{stage}] {cause}")


@dataclass
class PipelineResult:
    report: dict
    kg: KnowledgeGraph | None = None
    intents: list[Intent] = field(default_factory=list)
    vocabularies: dict[str, EntityVocabulary] = field(default_factory=dict)
    pools: dict[str, dict[str, list[str]]] = field(default_factory=dict)
    files: list[str] = field(default_factory=list)


class _Run:
    def __init__(self, config: PipelineConfig):
        self.config = config
        self.report: dict = {"status": "ok", "stages": {}, "warnings": []}

    def stage(self, name: str, fn, *args):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                result = fn(*args)
            except PipelineError:
                raise
            except (IntentGenError, OSError, ValueError) as exc:
                self._record(name, caught)
                self.report["status"] = "error"
                self.report["error"] = {"stage": name, "message": str(exc)}
                raise PipelineError(name, exc) from exc
        self._record(name, caught)
        return result

    def _record(self, name, caught):
        for w in caught:
            self.report["warnings"].append({"stage": name, "message": str(w.message)})


def graph_name_for(path: str, taken: set[str]) -> str:
    base = Path(path).stem or "graph"
    name, n = base, 2
    while name in taken:
        name, n = f"{base}-{n}", n + 1
    taken.add(name)
    return name


def ingest(config: PipelineConfig) -> tuple[KnowledgeGraph, dict]:
    kg = KnowledgeGraph()
    classes, properties = kg.load_vocabulary(config.vocab)
    taken: set[str] = set()
    graphs = {}
    for path in config.graphs:
        with open(path, "rb") as fh:
            data = fh.read()
        name = graph_name_for(path, taken)
        rep = kg.ingest_jsonld(data, name)
        graphs[name] = rep.triple_count
    return kg, {"classes": classes, "properties": properties, "graphs": graphs}


def extract(kg: KnowledgeGraph) -> tuple[list[Intent], dict[str, str]]:
    """Intents sorted by name, plus the action type each one came from."""
    intents, action_types = [], {}
    for graph_name, node in find_actions(kg):
        action = parse_action(kg, node, graph_name)
        intent = extract_intent(action)
        intents.append(intent)
        action_types.setdefault(intent_name(intent), action.action_type)
    intents.sort(key=intent_name)
    return intents, action_types


def populate(kg: KnowledgeGraph, intents: list[Intent], k: int, seed: int):
    populator = SlotPopulator(kg)
    vocabularies: dict[str, EntityVocabulary] = {}
    samples: dict[str, dict[str, list[str]]] = {}
    for intent in intents:
        per_intent = samples.setdefault(intent_name(intent), {})
        date_index = 0
        for m in intent.modifiers:
            if not is_datatype(m.value_type) or local_name(m.value_type) == "Text":
                vocabularies[m.name] = populator.populate(m)
            # consecutive date slots get consecutive, non-overlapping date runs
            offset = 0
            if m.value_type in DATE_TYPES:
                offset = date_index * k
                date_index += 1
            per_intent[m.name] = populator.sample_values(m, k, seed, start_offset=offset)
    return vocabularies, samples


def _relevant(generic: EmbeddingTable, domain: EmbeddingTable, seeds: list[str], pos: str,
              beta: float, lexicon: Lexicon) -> list[str]:
    try:
        return relevant_words(generic, domain, seeds, pos, beta, lexicon)
    except OutOfVocabularyError as exc:
        warnings.warn(f"no embedding neighbours for {seeds}: {exc}", IntentGenWarning, stacklevel=2)
        return []


def word_pools(kg: KnowledgeGraph, intent: Intent, action_type: str, lexicon: Lexicon,
               generic: EmbeddingTable, domain: EmbeddingTable, beta: float, synset_k: int):
    """Verb and noun pools: the intent's own words, WordNet synonyms, then embedding neighbours."""
    verb_seeds = [normalize_lemma(intent.act)]
    if lexicon.contains(intent.act, VERB):
        verb_seeds += lexicon.relevant_synonyms(intent.act, VERB, kg.comment(action_type) or "", synset_k)
    verbs = verb_seeds + _relevant(generic, domain, verb_seeds, VERB, beta, lexicon)

    noun_seeds = []
    for t in intent.object_types:
        token = normalize_lemma(tokenize_type_name(t))
        noun_seeds.append(token)
        if lexicon.contains(token, NOUN):
            noun_seeds += lexicon.relevant_synonyms(token, NOUN, kg.comment(t) or "", synset_k)
    nouns = noun_seeds + _relevant(generic, domain, noun_seeds, NOUN, beta, lexicon)
    return _surface(verbs), _surface(nouns)


def _surface(words: list[str]) -> list[str]:
    return list(dict.fromkeys(w.replace("_", " ") for w in words))


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    """Run the stages up to ``config.until``.

    Raises :class:`PipelineError` tagged with the failing stage.
    """
    if config.until not in STAGES:
        raise ValueError(f"unknown stage {config.until!r}")
    last = STAGES.index(config.until)
    run = _Run(config)
    stages = run.report["stages"]
    result = PipelineResult(run.report)

    def finished(stage: str) -> bool:
        return STAGES.index(stage) >= last

    kg, info = run.stage("ingest", ingest, config)
    result.kg = kg
    stages["ingest"] = {"graphs": info["graphs"],
                        "vocabulary": {"classes": info["classes"], "properties": info["properties"]}}
    if finished("ingest"):
        return result

    derived = run.stage("entail", lambda: {n: kg.apply_entailment(n) for n in kg.graph_names()})
    stages["entail"] = {"derived": derived}
    if finished("entail"):
        return result

    intents, action_types = run.stage("extract", extract, kg)
    result.intents = intents
    stages["extract"] = {"actions": len(intents), "intents": len({intent_name(i) for i in intents}),
                         "modifiers": sum(len(i.modifiers) for i in intents)}
    if finished("extract"):
        return result

    vocabularies, samples = run.stage("populate", populate, kg, intents, config.samples, config.seed)
    result.vocabularies = vocabularies
    custom = {local_name(m.value_type) for i in intents for m in i.modifiers if not is_datatype(m.value_type)}
    stages["populate"] = {"vocabularies": len(vocabularies), "entityTypes": len(custom),
                          "values": sum(len(v.values) for v in vocabularies.values())}
    if finished("populate"):
        return result

    lexicon = run.stage("lexicon", load_wordnet, config.wordnet)
    stages["lexicon"] = {"synsets": lexicon.counts()}
    if finished("lexicon"):
        return result

    def embeddings():
        return load_vectors(config.generic_vec, GENERIC), load_vectors(config.domain_vec, DOMAIN)

    generic, domain = run.stage("embeddings", embeddings)
    stages["embeddings"] = {"generic": len(generic), "domain": len(domain), "beta": config.beta}
    if finished("embeddings"):
        return result

    grammar: Grammar = run.stage("expand", load_grammar, config.grammar)
    for intent in intents:
        name = intent_name(intent)
        verbs, nouns = run.stage("expand", word_pools, kg, intent, action_types[name], lexicon,
                                 generic, domain, config.beta, config.synset_k)
        result.pools[name] = {"verbs": verbs, "nouns": nouns}
    stages["expand"] = {"pools": result.pools}
    if finished("expand"):
        return result

    for intent in intents:
        name = intent_name(intent)
        pool = result.pools[name]
        intent.sentences = run.stage("generate", build_sentences, intent, grammar, pool["verbs"],
                                     pool["nouns"], samples[name], config.cap, config.seed)
    stages["generate"] = {"sentences": {intent_name(i): len(i.sentences) for i in intents}}
    if finished("generate") or config.out is None:
        return result

    result.files = run.stage("export", export_agent, intents, vocabularies, config.out, config.force)
    stages["export"] = {"out": os.fspath(config.out), "files": result.files}
    return result
