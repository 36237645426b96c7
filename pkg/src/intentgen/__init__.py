"""Generate dialogue intents, slots and training sentences from schema.org actions."""

from .actions import ActionDescription, extract_intent, find_actions, parse_action
from .embeddings import EmbeddingTable, load_vectors, relevant_words
from .export import export_agent, intent_name, map_datatype, read_agent, slot_name
from .grammar import Grammar, load_grammar
from .kg import KnowledgeGraph, Literal, Pattern
from .lexicon import Lexicon, dice, load_wordnet
from .model import AnnotatedSentence, Intent, Modifier, SlotSpan
from .pipeline import PipelineConfig, run_pipeline
from .sentences import build_sentences, tokenize_type_name
from .slots import EntityVocabulary, SlotPopulator, build_value_query

__version__ = "0.1.0"

__all__ = [
    "ActionDescription", "AnnotatedSentence", "EmbeddingTable", "EntityVocabulary", "Grammar",
    "Intent", "KnowledgeGraph", "Lexicon", "Literal", "Modifier", "Pattern", "PipelineConfig",
    "SlotPopulator", "SlotSpan", "build_sentences", "build_value_query", "dice", "export_agent",
    "extract_intent", "find_actions", "intent_name", "load_grammar", "load_vectors", "load_wordnet",
    "map_datatype", "parse_action", "read_agent", "relevant_words", "run_pipeline", "slot_name",
    "tokenize_type_name",
]
