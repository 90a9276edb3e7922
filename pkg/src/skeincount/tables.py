"""Braid-closure fixtures.

Knot words were checked by computing the determinant |Conway(2i)| from the
evaluated HOMFLYPT value and comparing with the standard table.
"""

from __future__ import annotations

import random

from .diagram import FramedDiagram, braid_closure

# name -> (strands, word, determinant or None)
KNOTS = {
    "0_1": (1, [], 1),
    "3_1": (2, [1, 1, 1], 3),
    "4_1": (3, [1, -2, 1, -2], 5),
    "5_1": (2, [1] * 5, 5),
    "5_2": (3, [1, 1, 1, 2, -1, 2], 7),
    "6_1": (4, [1, 1, 2, -1, -3, 2, -3], 9),
    "6_2": (3, [1, 1, 1, -2, 1, -2], 11),
    "6_3": (3, [1, 1, -2, 1, -2, -2], 13),
    "7_1": (2, [1] * 7, 7),
    "7_2": (4, [1, 1, 1, 2, -1, 2, 3, -2, 3], 11),
    "7_3": (3, [1] * 5 + [2, -1, 2], 13),
    "7_4": (4, [1, 1, 2, -1, 2, 2, 3, -2, 3], 15),
    "7_5": (3, [1, 1, 1, 1, 2, -1, 2, 2], 17),
    "7_6": (4, [1, 1, -2, 1, 3, -2, 3], 19),
    "7_7": (4, [1, -2, 1, -2, 3, -2, 3], 21),
    "8_19": (3, [1, 1, 1, 2, 1, 1, 1, 2], 3),
    "8_20": (3, [1, 1, 1, -2, -1, -1, -1, -2], 9),
    "8_21": (3, [1, 1, 1, 2, -1, -1, 2, 2], 15),
}

LINKS = {
    "hopf": (2, [1, 1]),
    "hopf_neg": (2, [-1, -1]),
    "unlink2": (2, [1, -1]),
    "T(2,4)": (2, [1] * 4),
    "T(2,6)": (2, [1] * 6),
    "whitehead": (3, [1, 1, -2, 1, -2]),
    "borromean": (3, [1, -2] * 3),
    "T(3,3)": (3, [1, 2] * 3),
    "chain3": (3, [1, 1, 2, 2]),
}

# larger reduced alternating closures used for timing
LARGE = {
    "alt10": (3, [1, -2] * 4 + [1, 1]),
    "alt10b": (3, [1, 1, -2, 1, -2, 1, -2, -2, 1, -2]),
    "alt12": (3, [1, -2] * 5 + [1, 1]),
    "alt12b": (5, [1, -2, 3, -4] * 3),
}


def knot(name: str) -> FramedDiagram:
    n, w, _ = KNOTS[name]
    return braid_closure(n, w)


def link(name: str) -> FramedDiagram:
    if name in KNOTS:
        return knot(name)
    if name in LINKS:
        n, w = LINKS[name]
    else:
        n, w = LARGE[name]
    return braid_closure(n, w)


def fixture_table(max_crossings: int = 9) -> dict:
    """Named knots and links whose braid diagrams have at most ``max_crossings`` crossings."""
    out = {}
    for name, (n, w, _) in KNOTS.items():
        if len(w) <= max_crossings:
            out[name] = braid_closure(n, w)
    for name, (n, w) in LINKS.items():
        if len(w) <= max_crossings:
            out[name] = braid_closure(n, w)
    return out


def random_braid_corpus(count: int = 200, max_crossings: int = 10, seed: int = 2024,
                        strands=(2, 3, 4, 5)) -> list:
    """Deterministic list of (strands, word) with 1..max_crossings letters, all distinct."""
    rng = random.Random(seed)
    seen = set()
    out = []
    while len(out) < count:
        n = rng.choice(strands)
        length = rng.randint(1, max_crossings)
        w = tuple(rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(length))
        if (n, w) in seen:
            continue
        seen.add((n, w))
        out.append((n, list(w)))
    return out
