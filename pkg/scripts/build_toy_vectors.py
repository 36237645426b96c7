"""Write the toy generic and domain vector tables shipped with the package.

    python scripts/build_toy_vectors.py src/intentgen/data

Each designed vector is a handful of axis components plus one component
solved so the row has unit length; that pins cosines such as
search/find = 0.67 exactly.  Filler tokens are seeded random vectors for
words the mini-WordNet does not know, so they never pass a POS filter.
"""

import math
import os
import sys

import numpy as np

DIM = 8

# token: ({axis: component}, axis solved for unit norm)
GENERIC = {
    # verbs
    "search": ({0: 1.0}, None),
    "look_for": ({0: 0.8}, 4),
    "seek": ({0: 0.7}, 4),
    "find": ({0: 0.67}, 1),
    "need": ({0: 0.51}, 2),
    "look_around": ({0: 0.57}, 3),
    "explore": ({0: 0.6, 4: 0.3}, 3),
    "rout_up": ({1: 0.75}, 5),
    "want": ({0: 0.45}, 2),
    "discover": ({0: 0.4}, 1),
    "hunt": ({0: 0.35, 4: 0.35}, 5),
    "buy": ({0: 0.1, 2: 0.2}, 5),
    "book": ({0: 0.2}, 7),
    "reserve": ({0: 0.15, 2: 0.3}, 5),
    # nouns
    "hotel_room": ({6: 1.0}, None),
    "lodging_reservation": ({7: 1.0}, None),
    "hotel": ({6: 0.62}, 5),
    "accommodation": ({6: 0.45, 5: 0.6}, 4),
    "reservation": ({7: 0.48}, 3),
    "room": ({6: 0.49}, 1),
    "lodging": ({6: 0.3, 7: 0.3}, 2),
    "event": ({6: 0.1}, 3),
    "concert": ({6: 0.05}, 2),
    "product": ({7: 0.1}, 1),
    "case": ({7: 0.2}, 3),
}

DOMAIN = {
    "search": ({0: 1.0}, None),
    "look_for": ({0: 0.9}, 1),
    "seek": ({0: 0.85}, 1),
    "find": ({0: 0.8}, 2),
    "rout_up": ({0: 0.7}, 2),
    "hunt": ({0: 0.65}, 3),
    "look_around": ({0: 0.3}, 3),
    "hotel_room": ({5: 1.0}, None),
    "lodging_reservation": ({6: 1.0}, None),
    "hotel": ({5: 0.6}, 4),
    "accommodation": ({5: 0.8}, 7),
    "booking": ({6: 0.7}, 7),
    "room": ({5: 0.3}, 4),
}

FILLERS = [
    "the", "of", "and", "a", "for", "with", "hotels", "searching", "wifi", "spa", "wellness",
    "berlin", "innsbruck", "price", "cheap", "night", "nacht", "breakfast", "pool", "guest",
    "lobby", "airport", "city", "beach", "ticket",
]
DOMAIN_FILLERS = ["checkin", "checkout", "double_room", "suite", "sauna", "parking", "minibar"]


def solve(spec):
    out = [0.0] * DIM
    fixed, free = spec
    for axis, value in fixed.items():
        out[axis] = value
    if free is not None:
        rest = 1.0 - sum(v * v for v in fixed.values())
        if rest <= 0:
            raise SystemExit(f"no room left on axis {free}")
        out[free] = math.sqrt(rest)
    return out


def write(path, table, fillers, seed, header):
    rng = np.random.default_rng(seed)
    rows = {t: solve(spec) for t, spec in table.items()}
    for t in fillers:
        rows[t] = list(rng.normal(size=DIM))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            fh.write(f"{len(rows)} {DIM}\n")
        for t, vec in rows.items():
            fh.write(t + " " + " ".join(repr(float(v)) for v in vec) + "\n")
    print(f"{path}: {len(rows)} tokens")


def main(dst):
    os.makedirs(dst, exist_ok=True)
    write(os.path.join(dst, "toy-generic.vec"), GENERIC, FILLERS, 7, header=True)
    write(os.path.join(dst, "toy-domain.vec"), DOMAIN, DOMAIN_FILLERS, 11, header=False)


if __name__ == "__main__":
    main(sys.argv[1])
