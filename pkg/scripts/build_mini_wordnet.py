"""Cut the shipped mini-WordNet fixture out of a full Princeton WordNet 3.0.

    python scripts/build_mini_wordnet.py ~/nltk_data/corpora/wordnet src/intentgen/data/mini-wordnet

Selected senses plus their full hypernym closure are rewritten with fresh
byte offsets, so the output is a valid database in its own right.
"""

import os
import sys

from intentgen.lexicon import NOUN, VERB, load_wordnet

# (lemma, pos, offsets in WordNet 3.0); None keeps every sense.
SELECTION = [
    ("search", VERB, None),
    ("seek", VERB, [2240481, 1315613]),
    ("look_for", VERB, None),
    ("look", VERB, [2130524, 2153709]),
    ("explore", VERB, None),
    ("find", VERB, [2248465, 2154508, 2285629]),
    ("discover", VERB, [2154508]),
    ("need", VERB, None),
    ("want", VERB, [1825237, 1188725]),
    ("look_around", VERB, None),
    ("rout_up", VERB, None),
    ("research", VERB, None),
    ("locate", VERB, [2286204]),
    ("hunt", VERB, [1316401]),
    ("buy", VERB, [2207206]),
    ("book", VERB, [2498320]),
    ("reserve", VERB, [2498320]),
    ("hotel", NOUN, None),
    ("hotel_room", NOUN, None),
    ("room", NOUN, [4105893]),
    ("accommodation", NOUN, [2672371, 7369604, 7177437]),
    ("lodging", NOUN, [3546340]),
    ("reservation", NOUN, [8587174, 1218327]),
    ("booking", NOUN, [1218327]),
    ("event", NOUN, [29378, 13943400]),
    ("case", NOUN, [7308889, 13943400, 1182654, 2974697, 2975212, 4190747]),
    ("product", NOUN, [4007894]),
    ("concert", NOUN, None),
]

LICENSE = [
    "  1 Subset of WordNet 3.0 (c) 2006 Princeton University, used under the WordNet license.",
    "  2 Offsets are renumbered for this file; pointers other than @ are dropped.",
]


def main(src, dst):
    full = load_wordnet(src)
    keep = {NOUN: set(), VERB: set()}
    for lemma, pos, offsets in SELECTION:
        chosen = [s for s in full.synsets_for(lemma, pos) if offsets is None or s.offset in offsets]
        if not chosen:
            raise SystemExit(f"nothing selected for {lemma}/{pos}")
        for s in chosen:
            keep[pos] |= full.ancestors(s)
    os.makedirs(dst, exist_ok=True)
    for pos, suffix in ((NOUN, "noun"), (VERB, "verb")):
        synsets = sorted((full.synset(o, p) for o, p in keep[pos]), key=lambda s: s.offset)
        # Offsets depend on line lengths, which depend on offsets: iterate.
        new = {s.offset: 0 for s in synsets}
        while True:
            before = dict(new)
            lines, pos_bytes = [], sum(len(l) + 1 for l in LICENSE)
            for s in synsets:
                new[s.offset] = pos_bytes
                line = _data_line(s, new, pos)
                lines.append(line)
                pos_bytes += len(line.encode()) + 1
            if new == before:
                break
        with open(os.path.join(dst, f"data.{suffix}"), "w", newline="\n") as fh:
            fh.write("\n".join(LICENSE + lines) + "\n")

        index = {}
        for s in synsets:
            for w in s.words:
                index.setdefault(w, [])
        for lemma in index:
            for s in full.synsets_for(lemma, pos):
                if s.offset in new:
                    index[lemma].append(new[s.offset])
        with open(os.path.join(dst, f"index.{suffix}"), "w", newline="\n") as fh:
            fh.write("\n".join(LICENSE) + "\n")
            for lemma in sorted(index):
                offs = index[lemma]
                ptrs = ["@"] if any(full.synset(o, pos).hypernyms for o, p in keep[pos]
                                    if lemma in full.synset(o, pos).words) else []
                fields = [lemma, pos, str(len(offs)), str(len(ptrs)), *ptrs, str(len(offs)), "0",
                          *(f"{o:08d}" for o in offs)]
                fh.write(" ".join(fields) + "  \n")
        print(f"{suffix}: {len(synsets)} synsets, {len(index)} lemmas")


def _data_line(s, new, pos):
    words = " ".join(f"{w} 0" for w in s.words)
    ptrs = " ".join(f"@ {new[h]:08d} {pos} 0000" for h in s.hypernyms)
    head = f"{new[s.offset]:08d} 00 {pos} {len(s.words):02x} {words} {len(s.hypernyms):03d}"
    if ptrs:
        head += " " + ptrs
    if pos == VERB:
        head += " 00"
    return f"{head} | {s.gloss}  "


if __name__ == "__main__":
    main(*sys.argv[1:3])
