"""WordNet-backed lexicon: synonyms, Dice-filtered synonyms, Wu-Palmer.

Reads the Princeton database format (``index.noun``, ``data.noun``,
``index.verb``, ``data.verb``).  Only lemmas, glosses and ``@`` hypernym
pointers are kept.
"""

from __future__ import annotations

import os
import re
import warnings
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import IntentGenWarning, UnknownWordError, WordNetFileError, WordNetParseError

NOUN = "n"
VERB = "v"
POS_NAMES = {NOUN: "noun", VERB: "verb"}
_POS_ALIASES = {"n": NOUN, "noun": NOUN, "v": VERB, "verb": VERB}


def normalize_pos(pos: str) -> str:
    try:
        return _POS_ALIASES[pos.lower()]
    except KeyError:
        raise ValueError(f"unsupported part of speech: {pos!r}") from None


def normalize_lemma(word: str) -> str:
    return "_".join(word.strip().lower().split())


@dataclass(frozen=True)
class Synset:
    offset: int
    pos: str
    words: tuple[str, ...]
    gloss: str
    hypernyms: tuple[int, ...] = ()

    @property
    def id(self) -> tuple[int, str]:
        return (self.offset, self.pos)

    @property
    def definition(self) -> str:
        """The gloss without its quoted usage examples."""
        return self.gloss.split('; "', 1)[0].strip()


def _bigrams(text: str) -> list[str]:
    out = []
    for word in text.casefold().split():
        out.extend(word[i:i + 2] for i in range(len(word) - 1))
    return out


def dice(a: str, b: str) -> float:
    """Sørensen-Dice coefficient over within-word character bigrams."""
    ba, bb = _bigrams(a), _bigrams(b)
    if not ba or not bb:
        return 1.0 if not ba and not bb and a.casefold() == b.casefold() else 0.0
    common = sum((Counter(ba) & Counter(bb)).values())
    return 2.0 * common / (len(ba) + len(bb))


class Lexicon:
    """Immutable collection of noun and verb synsets."""

    def __init__(self, synsets: Iterable[Synset], index: dict[str, dict[str, list[int]]] | None = None):
        self._synsets: dict[tuple[int, str], Synset] = {}
        for s in synsets:
            self._synsets[s.id] = s
        for s in self._synsets.values():
            for h in s.hypernyms:
                if (h, s.pos) not in self._synsets:
                    raise ValueError(f"hypernym {h} of synset {s.offset} is missing")
        if index is None:
            index = {}
            for s in sorted(self._synsets.values(), key=lambda s: s.offset):
                for w in s.words:
                    offsets = index.setdefault(s.pos, {}).setdefault(w, [])
                    if s.offset not in offsets:
                        offsets.append(s.offset)
        self._index = index
        self._depth: dict[tuple[int, str], int] = {}

    def counts(self) -> dict[str, int]:
        out = {NOUN: 0, VERB: 0}
        for s in self._synsets.values():
            out[s.pos] = out.get(s.pos, 0) + 1
        return out

    def synset(self, offset: int, pos: str) -> Synset:
        return self._synsets[(offset, normalize_pos(pos))]

    def contains(self, word: str, pos: str) -> bool:
        return normalize_lemma(word) in self._index.get(normalize_pos(pos), {})

    def synsets_for(self, word: str, pos: str) -> list[Synset]:
        pos = normalize_pos(pos)
        offsets = self._index.get(pos, {}).get(normalize_lemma(word), [])
        return [self._synsets[(o, pos)] for o in offsets]

    def synonyms(self, word: str, pos: str) -> list[tuple[str, tuple[int, str], str]]:
        """(lemma, synset id, gloss) for every other lemma sharing a synset with ``word``."""
        lemma = normalize_lemma(word)
        out = []
        for s in sorted(self.synsets_for(lemma, pos), key=lambda s: s.offset):
            for w in sorted(set(s.words)):
                if w != lemma:
                    out.append((w, s.id, s.gloss))
        return out

    def relevant_synonyms(self, word: str, pos: str, context_description: str, k: int = 2) -> list[str]:
        """Lemmas of the ``k`` senses whose definitions best match the context.

        Senses are ranked by Dice similarity between their definition and
        ``context_description`` (ties: lower offset first).
        """
        lemma = normalize_lemma(word)
        if not context_description or not context_description.strip():
            warnings.warn(f"no context description for {word!r}; keeping all synonyms",
                          IntentGenWarning, stacklevel=2)
            return _unique(w for w, _, _ in self.synonyms(lemma, pos))
        senses = self.synsets_for(lemma, pos)
        ranked = sorted(senses, key=lambda s: (-dice(s.definition, context_description), s.offset))
        keep = {s.id for s in ranked[:k]}
        return _unique(w for w, sid, _ in self.synonyms(lemma, pos) if sid in keep)

    def depth(self, synset: Synset) -> int:
        """Nodes on the longest hypernym path from the virtual root (depth 1)."""
        key = synset.id
        if key not in self._depth:
            if synset.hypernyms:
                self._depth[key] = 1 + max(self.depth(self._synsets[(h, synset.pos)])
                                           for h in synset.hypernyms)
            else:
                self._depth[key] = 2
        return self._depth[key]

    def ancestors(self, synset: Synset) -> set[tuple[int, str]]:
        seen = {synset.id}
        stack = [synset]
        while stack:
            cur = stack.pop()
            for h in cur.hypernyms:
                hid = (h, cur.pos)
                if hid not in seen:
                    seen.add(hid)
                    stack.append(self._synsets[hid])
        return seen

    def wup_similarity(self, w1: str, w2: str, pos: str) -> float:
        senses1 = self.synsets_for(w1, pos)
        senses2 = self.synsets_for(w2, pos)
        for word, senses in ((w1, senses1), (w2, senses2)):
            if not senses:
                raise UnknownWordError(f"{word!r} is not a {POS_NAMES[normalize_pos(pos)]} in the lexicon")
        best = 0.0
        for s1 in senses1:
            anc1 = self.ancestors(s1)
            for s2 in senses2:
                common = anc1 & self.ancestors(s2)
                lcs_depth = max((self.depth(self._synsets[c]) for c in common), default=1)
                score = 2.0 * lcs_depth / (self.depth(s1) + self.depth(s2))
                best = max(best, score)
        return best


def _unique(items: Iterable[str]) -> list[str]:
    return list(dict.fromkeys(items))


_ADJ_MARKER = re.compile(r"\([a-z]+\)$")


def _read_lines(path: str):
    """Yield (byte offset, decoded line) pairs.

    Offsets count every line terminator as one byte, so CRLF copies of the
    database still line up with the offsets recorded in it.
    """
    pos = 0
    with open(path, "rb") as fh:
        for raw in fh:
            body = raw.rstrip(b"\r\n")
            yield pos, body.decode("utf-8", errors="replace")
            pos += len(body) + 1


def _parse_data_file(path: str, pos: str) -> list[Synset]:
    name = os.path.basename(path)
    synsets = []
    for byte_offset, line in _read_lines(path):
        if not line or line.startswith(" "):
            continue
        head, sep, gloss = line.partition("|")
        tokens = head.split()
        try:
            offset = int(tokens[0])
            if offset != byte_offset:
                raise ValueError(f"offset field {tokens[0]} does not match file position")
            ss_type = tokens[2]
            if ss_type != pos:
                raise ValueError(f"synset type {ss_type!r} in {name}")
            w_cnt = int(tokens[3], 16)
            words = tuple(normalize_lemma(_ADJ_MARKER.sub("", tokens[4 + 2 * i])) for i in range(w_cnt))
            i = 4 + 2 * w_cnt
            p_cnt = int(tokens[i])
            hypernyms = []
            for j in range(p_cnt):
                sym, target, tpos, _st = tokens[i + 1 + 4 * j: i + 5 + 4 * j]
                if sym == "@" and tpos == pos:
                    hypernyms.append(int(target))
            if not words:
                raise ValueError("synset without words")
        except (IndexError, ValueError) as exc:
            raise WordNetParseError(str(exc) or "malformed data line", name, byte_offset) from None
        synsets.append(Synset(offset, pos, words, gloss.strip(), tuple(hypernyms)))
    return synsets


def _parse_index_file(path: str, pos: str, known: set[int]) -> dict[str, list[int]]:
    name = os.path.basename(path)
    index: dict[str, list[int]] = {}
    for byte_offset, line in _read_lines(path):
        if not line or line.startswith(" "):
            continue
        tokens = line.split()
        try:
            lemma = tokens[0]
            synset_cnt = int(tokens[2])
            p_cnt = int(tokens[3])
            start = 4 + p_cnt + 2
            offsets = [int(t) for t in tokens[start:start + synset_cnt]]
            if len(offsets) != synset_cnt:
                raise ValueError("truncated offset list")
            for o in offsets:
                if o not in known:
                    raise ValueError(f"offset {o} not found in data file")
        except (IndexError, ValueError) as exc:
            raise WordNetParseError(str(exc) or "malformed index line", name, byte_offset) from None
        index[normalize_lemma(lemma)] = offsets
    return index


def load_wordnet(directory) -> Lexicon:
    """Load noun and verb synsets from a Princeton WordNet ``dict`` directory."""
    directory = os.fspath(directory)
    synsets: list[Synset] = []
    index: dict[str, dict[str, list[int]]] = {}
    for pos, suffix in ((NOUN, "noun"), (VERB, "verb")):
        data_path = os.path.join(directory, f"data.{suffix}")
        index_path = os.path.join(directory, f"index.{suffix}")
        for path in (index_path, data_path):
            if not os.path.isfile(path):
                raise WordNetFileError(f"missing WordNet file: {path}")
        pos_synsets = _parse_data_file(data_path, pos)
        index[pos] = _parse_index_file(index_path, pos, {s.offset for s in pos_synsets})
        synsets.extend(pos_synsets)
    return Lexicon(synsets, index)
