"""A small line-oriented context-free grammar DSL.

::

    # comment
    S      -> CLAUSE TAIL?
    CLAUSE -> SUBJECT? VP | "I" "am" GVP
    VP     -> VERB FOR? OBJ
    TAIL   -> "on" {MOD:Date} | "with" {MOD:Entity}

Double-quoted strings are terminals.  ``VERB``, ``VERB_ING`` and ``NOUN`` are
lexical classes filled from the word pools.  ``{MOD:<type>}`` is a slot site
accepting a modifier whose value type is ``<type>`` (a schema.org datatype
local name, ``Entity`` for any non-datatype class, or ``*`` for anything).
A trailing ``?`` makes an element optional.  The first rule's left-hand side
is the start symbol; repeated left-hand sides add alternatives.

Recursion is rejected, so every grammar has a finite language.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from itertools import product

from .errors import GrammarError

LEXICAL_CLASSES = frozenset({"VERB", "VERB_ING", "NOUN"})

_RULE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*->(.*)$")
_TOKEN = re.compile(r'\s*(?:("[^"]*")|(\{[^}]*\})|([A-Za-z_][A-Za-z0-9_]*)|(\|))(\?)?')


@dataclass(frozen=True)
class Symbol:
    """One grammar element.  ``kind`` is terminal, nonterminal, lexical or slot."""

    kind: str
    value: str
    optional: bool = False

    def __str__(self) -> str:
        text = {"terminal": f'"{self.value}"', "slot": "{MOD:" + self.value + "}"}.get(self.kind, self.value)
        return text + ("?" if self.optional else "")


@dataclass(frozen=True)
class Grammar:
    start: str
    productions: dict[str, tuple[tuple[Symbol, ...], ...]]

    def __len__(self) -> int:
        return sum(len(alts) for alts in self.productions.values())

    def has_slot_sites(self) -> bool:
        return any(sym.kind == "slot" for alts in self.productions.values()
                   for alt in alts for sym in alt)

    def skeletons(self) -> list[tuple[Symbol, ...]]:
        """Every terminal/lexical/slot sequence derivable from the start symbol, in rule order."""
        memo: dict[str, list[tuple[Symbol, ...]]] = {}

        def expand(nt: str) -> list[tuple[Symbol, ...]]:
            if nt not in memo:
                out: list[tuple[Symbol, ...]] = []
                for alt in self.productions[nt]:
                    options = []
                    for sym in alt:
                        opts = expand(sym.value) if sym.kind == "nonterminal" else [(Symbol(sym.kind, sym.value),)]
                        if sym.optional:
                            opts = [()] + opts
                        options.append(opts)
                    for combo in product(*options):
                        out.append(tuple(s for part in combo for s in part))
                memo[nt] = list(dict.fromkeys(out))
            return memo[nt]

        return expand(self.start)


def parse_grammar(text: str) -> Grammar:
    productions: dict[str, list[tuple[Symbol, ...]]] = {}
    start = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = _strip_comment(line)
        if not stripped.strip():
            continue
        m = _RULE.match(stripped)
        if not m:
            raise GrammarError(f"line {lineno}: expected 'NAME -> ...'")
        lhs, body = m.group(1), m.group(2)
        if lhs in LEXICAL_CLASSES:
            raise GrammarError(f"line {lineno}: {lhs} is a lexical class and cannot be redefined")
        start = start or lhs
        alts = _parse_body(body, lineno)
        productions.setdefault(lhs, []).extend(alts)
    if start is None:
        raise GrammarError("grammar has no rules")
    grammar = Grammar(start, {k: tuple(v) for k, v in productions.items()})
    validate(grammar)
    return grammar


def _strip_comment(line: str) -> str:
    in_quote = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_quote = not in_quote
        elif ch == "#" and not in_quote:
            return line[:i]
    return line


def _parse_body(body: str, lineno: int) -> list[tuple[Symbol, ...]]:
    alts: list[tuple[Symbol, ...]] = []
    current: list[Symbol] = []
    pos = 0
    while pos < len(body):
        if not body[pos:].strip():
            break
        m = _TOKEN.match(body, pos)
        if not m or m.end() == pos:
            raise GrammarError(f"line {lineno}: cannot parse {body[pos:].strip()!r}")
        pos = m.end()
        terminal, slot, name, bar, opt = m.groups()
        if bar:
            if opt:
                raise GrammarError(f"line {lineno}: '?' cannot follow '|'")
            alts.append(tuple(current))
            current = []
            continue
        optional = bool(opt)
        if terminal is not None:
            words = terminal[1:-1].strip()
            if not words:
                raise GrammarError(f"line {lineno}: empty terminal")
            current.append(Symbol("terminal", words, optional))
        elif slot is not None:
            inner = slot[1:-1].strip()
            if not inner.startswith("MOD:") or not inner[4:].strip():
                raise GrammarError(f"line {lineno}: slot sites look like {{MOD:<type>}}, got {slot}")
            current.append(Symbol("slot", inner[4:].strip(), optional))
        elif name in LEXICAL_CLASSES:
            current.append(Symbol("lexical", name, optional))
        else:
            current.append(Symbol("nonterminal", name, optional))
    alts.append(tuple(current))
    for alt in alts:
        if not alt:
            raise GrammarError(f"line {lineno}: empty alternative")
    return alts


def validate(grammar: Grammar) -> None:
    """Reject undefined nonterminals and any recursion."""
    for lhs, alts in grammar.productions.items():
        for alt in alts:
            for sym in alt:
                if sym.kind == "nonterminal" and sym.value not in grammar.productions:
                    raise GrammarError(f"{lhs} refers to undefined nonterminal {sym.value}")

    state: dict[str, int] = {}

    def visit(nt: str, trail: list[str]):
        state[nt] = 1
        for alt in grammar.productions[nt]:
            for sym in alt:
                if sym.kind != "nonterminal":
                    continue
                if state.get(sym.value) == 1:
                    cycle = trail[trail.index(sym.value):] + [sym.value] if sym.value in trail else [nt, sym.value]
                    raise GrammarError("recursive rule: " + " -> ".join(cycle))
                if sym.value not in state:
                    visit(sym.value, trail + [sym.value])
        state[nt] = 2

    for nt in grammar.productions:
        if nt not in state:
            visit(nt, [nt])


def load_grammar(path=None) -> Grammar:
    """Load a grammar file; without a path, the bundled default grammar."""
    if path is None:
        path = default_grammar_path()
    path = os.fspath(path)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise GrammarError(f"cannot read grammar {path}: {exc.strerror}") from None
    return parse_grammar(text)


def default_grammar_path() -> str:
    return os.path.join(os.path.dirname(__file__), "data", "intent.cfg")
