"""Word-vector tables, cosine similarity and relevant-word expansion.

Tables are read from the plain text vector format used by word2vec, GloVe
and fastText: an optional ``<count> <dimension>`` header, then one
``token f1 ... fD`` line per word.  Vectors are unit-normalized at load, so
cosine similarity is a dot product.
"""

from __future__ import annotations

import os
import warnings
from typing import Iterable, Sequence

import numpy as np

from .errors import IntentGenWarning, OutOfVocabularyError, VectorFormatError
from .lexicon import Lexicon, normalize_lemma

GENERIC = "generic"
DOMAIN = "domain"
DEFAULT_BETA = 0.5


def normalize_token(token: str) -> str:
    return normalize_lemma(token)


class EmbeddingTable:
    """Immutable token -> unit vector map."""

    def __init__(self, tokens: Sequence[str], matrix: np.ndarray, label: str = GENERIC):
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != len(tokens):
            raise ValueError("matrix must have one row per token")
        if matrix.shape[0] and matrix.shape[1] < 1:
            raise ValueError("dimension must be positive")
        norms = np.linalg.norm(matrix, axis=1)
        if np.any(norms == 0):
            bad = tokens[int(np.flatnonzero(norms == 0)[0])]
            raise ValueError(f"zero vector for {bad!r}")
        self.tokens = tuple(tokens)
        self.label = label
        self.matrix = matrix / norms[:, None]
        self.matrix.setflags(write=False)
        self._row = {t: i for i, t in enumerate(self.tokens)}
        if len(self._row) != len(self.tokens):
            raise ValueError("duplicate tokens")

    @property
    def dimension(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return normalize_token(token) in self._row

    def vector(self, token: str) -> np.ndarray:
        key = normalize_token(token)
        try:
            return self.matrix[self._row[key]]
        except KeyError:
            raise OutOfVocabularyError(f"{key!r} is not in the {self.label} vector table") from None

    def cosine(self, w1: str, w2: str) -> float:
        v1, v2 = self.vector(w1), self.vector(w2)
        return float(np.clip(v1 @ v2, -1.0, 1.0))

    def most_similar(self, seeds: Iterable[str], pos: str, beta: float = DEFAULT_BETA,
                     lexicon: Lexicon | None = None) -> list[tuple[str, float]]:
        """Tokens whose best cosine to any in-vocabulary seed exceeds ``beta``.

        Seeds themselves are excluded.  With a lexicon, only tokens it knows
        under ``pos`` are kept (vectors carry no part of speech).  Sorted by
        score descending, then token.
        """
        seeds = list(dict.fromkeys(normalize_token(s) for s in seeds))
        present = [s for s in seeds if s in self._row]
        if not present:
            raise OutOfVocabularyError(
                f"none of the seeds {seeds} is in the {self.label} vector table")
        if not len(self):
            return []
        seed_rows = self.matrix[[self._row[s] for s in present]]
        scores = (self.matrix @ seed_rows.T).max(axis=1)
        excluded = set(seeds)
        hits = []
        for i in np.flatnonzero(scores > beta):
            token = self.tokens[i]
            if token in excluded:
                continue
            if lexicon is not None and not lexicon.contains(token, pos):
                continue
            hits.append((token, float(min(scores[i], 1.0))))
        hits.sort(key=lambda h: (-h[1], h[0]))
        return hits


def empty_table(label: str = DOMAIN) -> EmbeddingTable:
    return EmbeddingTable([], np.zeros((0, 1)), label)


def load_vectors(path, label: str = GENERIC) -> EmbeddingTable:
    """Read a text vector file.  A later duplicate of a token replaces it (with a warning)."""
    path = os.fspath(path)
    rows: dict[str, list[float]] = {}
    dimension = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            parts = raw.split()
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                dimension = int(parts[1])
                if dimension < 1:
                    raise VectorFormatError("header declares dimension 0", lineno)
                continue
            token, values = normalize_token(parts[0]), parts[1:]
            if dimension is None:
                if not values:
                    raise VectorFormatError(f"no components for {token!r}", lineno)
                dimension = len(values)
            if len(values) != dimension:
                raise VectorFormatError(
                    f"expected {dimension} components for {token!r}, found {len(values)}", lineno)
            try:
                vec = [float(v) for v in values]
            except ValueError:
                raise VectorFormatError(f"non-numeric component in vector for {token!r}", lineno) from None
            if not any(vec):
                raise VectorFormatError(f"zero vector for {token!r}", lineno)
            if token in rows:
                warnings.warn(f"{path}:{lineno}: duplicate token {token!r}; keeping the later vector",
                              IntentGenWarning, stacklevel=2)
                del rows[token]
            rows[token] = vec
    if not rows:
        return EmbeddingTable([], np.zeros((0, dimension or 1)), label)
    return EmbeddingTable(list(rows), np.array(list(rows.values())), label)


def relevant_words(generic: EmbeddingTable, domain: EmbeddingTable, synonyms: Sequence[str],
                   pos: str, beta: float = DEFAULT_BETA, lexicon: Lexicon | None = None) -> list[str]:
    """Generic neighbours of ``synonyms`` plus the domain neighbours that
    are also close, in the generic space, to one of those generic neighbours.

    Domain candidates are compared against the generic hits as first found,
    never against words admitted along the way, so the result does not
    depend on iteration order.
    """
    base = generic.most_similar(synonyms, pos, beta, lexicon)
    result = [w for w, _ in base]
    if not len(domain):
        warnings.warn("domain vector table is empty; using generic neighbours only",
                      IntentGenWarning, stacklevel=2)
        return result
    snapshot = list(result)
    seen = set(result) | {normalize_token(s) for s in synonyms}
    for word, _score in domain.most_similar(synonyms, pos, beta, lexicon):
        if word in seen:
            continue
        if word not in generic:
            warnings.warn(f"domain word {word!r} is not in the generic table; skipped",
                          IntentGenWarning, stacklevel=2)
            continue
        if any(generic.cosine(word, v) > beta for v in snapshot):
            result.append(word)
            seen.add(word)
    return result
