"""Convert library objects into the key-based payloads stored in tests/golden."""

from collections import defaultdict

from irrex.metrics import layer_sizes
from irrex.multiway import branchial_graph


def multiway_payload(g, with_branchial=True):
    key = {s.id: s.key.decode() for s in g.states}
    out = {
        "layer_sizes": layer_sizes(g),
        "events": sorted([e.layer, key[e.source], e.label, key[e.target]] for e in g.events),
    }
    if with_branchial:
        out["branchial"] = [
            sorted(sorted([key[a], key[b]]) for a, b in branchial_graph(g, t).edges)
            for t in range(g.depth + 1)
        ]
    return out


def is_acyclic(nodes, arcs):
    indeg = {n: 0 for n in nodes}
    out = defaultdict(list)
    for a, b in arcs:
        out[a].append(b)
        indeg[b] += 1
    ready = [n for n, d in indeg.items() if d == 0]
    seen = 0
    while ready:
        n = ready.pop()
        seen += 1
        for m in out[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                ready.append(m)
    return seen == len(indeg)


def token_event_arcs(teg):
    nodes = [("t", i) for i in range(len(teg.tokens))] + [("e", e.id) for e in teg.events]
    arcs = [(("t", a), ("e", b)) for a, b in teg.ingestion] + [(("e", a), ("t", b)) for a, b in teg.egestion]
    return nodes, arcs


def creator_counts(teg):
    made = defaultdict(int)
    for _, tok in teg.egestion:
        made[tok] += 1
    return made
