"""Brute-force count of transitive permutation groups of degree d, up to conjugacy.

Subgroups of S_d are grown from cyclic subgroups by adjoining one element at a
time until nothing new appears. Transitive ones are then reduced to a canonical
form, the least sorted element tuple over all relabelings, and counted.

Writes transitive_counts.json next to this script.
"""

import itertools
import json
import os
import sys


def compose(p, q):
    return tuple(p[i] for i in q)


def close(gens, d):
    ident = tuple(range(d))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def all_subgroups(d):
    elements = list(itertools.permutations(range(d)))
    found = {close([g], d) for g in elements}
    frontier = list(found)
    while frontier:
        nxt = []
        for h in frontier:
            base = gens_of(h, d)
            for g in elements:
                if g in h:
                    continue
                k = close(base + [g], d)
                if k not in found:
                    found.add(k)
                    nxt.append(k)
        frontier = nxt
    return found


def gens_of(h, d):
    gens = []
    current = close([], d)
    for g in sorted(h):
        if g not in current:
            gens.append(g)
            current = close(gens, d)
    return gens


def transitive(h, d):
    return len({g[0] for g in h}) == d


def canonical(h, d):
    best = None
    for s in itertools.permutations(range(d)):
        inv = [0] * d
        for i, si in enumerate(s):
            inv[si] = i
        inv = tuple(inv)
        form = tuple(sorted(compose(compose(s, g), inv) for g in h))
        if best is None or form < best:
            best = form
    return best


def count(d):
    groups = [h for h in all_subgroups(d) if transitive(h, d)]
    return len({canonical(h, d) for h in groups}), len(groups)


def main():
    top = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    out = {}
    for d in range(1, top + 1):
        classes, raw = count(d)
        out[str(d)] = {"classes": classes, "transitive_subgroups": raw}
        print(d, classes, raw, flush=True)
    path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "transitive_counts.json")
    with open(path, "w") as f:
        json.dump(out, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
