"""Exhaustive ex(6, K_{2,2}^{(3)}) and f_3(6) over all 2^20 triple systems."""
import itertools
import json
import sys

import numpy as np

V = range(6)
TRIPLES = list(itertools.combinations(V, 3))
INDEX = {t: i for i, t in enumerate(TRIPLES)}


def mask(edges):
    return sum(1 << INDEX[tuple(sorted(e))] for e in edges)


def kst_masks():
    out = set()
    for y in itertools.combinations(V, 2):
        rest = [v for v in V if v not in y]
        for x1 in itertools.combinations(rest, 2):
            x2 = tuple(v for v in rest if v not in x1)
            out.add(mask([x + (w,) for x in (x1, x2) for w in y]))
    return sorted(out)


def quadruple_masks():
    out = set()
    for a, b, c, d in itertools.combinations(TRIPLES, 4):
        for p, q, r, s in ((a, b, c, d), (a, c, b, d), (a, d, b, c)):
            if not set(p) & set(q) and not set(r) & set(s) and set(p) | set(q) == set(r) | set(s):
                out.add(mask([a, b, c, d]))
    return sorted(out)


def maximum(patterns):
    sets = np.arange(1 << len(TRIPLES), dtype=np.int64)
    free = np.ones(sets.shape, dtype=bool)
    for m in patterns:
        free &= (sets & m) != m
    sizes = np.zeros(sets.shape, dtype=np.int64)
    for i in range(len(TRIPLES)):
        sizes += (sets >> i) & 1
    return int(sizes[free].max())


def main():
    kst, quad = kst_masks(), quadruple_masks()
    result = {
        "n": 6,
        "r": 3,
        "kst_pattern_masks": len(kst),
        "quadruple_masks": len(quad),
        "ex_k222": maximum(kst),
        "f3": maximum(quad),
    }
    json.dump(result, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
