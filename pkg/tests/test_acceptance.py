"""Acceptance gate: one check per criterion, each reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines appear in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))

import oracles as O  # noqa: E402
from corpus import (  # noqa: E402
    ORTHOGONALITY, XY_XZ, all_graphs, orthogonality_graph, random_path_evolutions, tm_path_graph,
)
from payloads import (  # noqa: E402
    creator_counts, is_acyclic, multiway_payload, token_event_arcs,
)
from irrex.category import Quiver, free_category  # noqa: E402
from irrex.cli import RunConfig, execute  # noqa: E402
from irrex.hypergraph import DOUBLE_SELF_LOOP, Hypergraph, canonical_form, successors  # noqa: E402
from irrex.io import GoldenFile, dumps  # noqa: E402
from irrex.metrics import report  # noqa: E402
from irrex.multiway import (  # noqa: E402
    SPATIAL, build_multiway, causal_graph, foliate, glocal_branchial_graph, token_event_graph,
)
from irrex.systems import HypergraphSystem, TuringSystem  # noqa: E402
from irrex.tm import TmConfig, TmSpec, decode_rule, encode_rule  # noqa: E402

GOLDEN = HERE / "golden"
S22 = TmSpec(2, 2)
RULES = [decode_rule(2506, S22), decode_rule(3506, S22)]
TAPE = [0, 1, 0, 0]


def golden(name):
    return GoldenFile.load(GOLDEN / f"{name}.json")


def check(cond, msg):
    if not cond:
        raise AssertionError(msg)


def criterion_1():
    t0 = time.perf_counter()
    bad = [n for n in range(S22.size) if encode_rule(decode_rule(n, S22)) != n]
    check(not bad, f"roundtrip fails for {bad[:5]}")
    check(O.mixed_radix(2506, 8, 4) == [4, 7, 1, 2], "oracle digits of 2506")
    check(dict(decode_rule(2506, S22).table) == O.tm_table(2506, 2, 2), "decode(2506) disagrees with oracle")
    elapsed = time.perf_counter() - t0
    check(elapsed < 1.0, f"took {elapsed:.2f}s")
    return f"4096/4096 roundtrips, digits [4,7,1,2], {elapsed:.2f}s"


def criterion_2():
    g = build_multiway(TuringSystem(RULES[:1]), [TmConfig.from_tape(TAPE)], 4)
    q = Quiver.from_multiway(g)
    outdeg = max(sum(1 for _, s, _ in q.arrows if s == o) for o in q.objects)
    check(len(q.objects) == 5 and outdeg <= 1, f"{len(q.objects)} objects, out-degree {outdeg}")
    fc = free_category(q)
    check(len(fc.morphisms) == 10 and len(fc.identities) == 5,
          f"{len(fc.morphisms)} morphisms, {len(fc.identities)} identities")
    return "5 objects, out-degree 1, 10 morphisms + 5 identities"


def criterion_3():
    samples = random_path_evolutions(100, seed=0)
    for n, tape, steps in samples:
        rep = report(tm_path_graph(n, tape, steps))
        check(rep.max_sequential == 0, f"rule {n} tape {tape}: defect {rep.max_sequential}")
        check(rep.functor_laws.ok, f"rule {n} tape {tape}: {rep.functor_laws.count} functor violations")
    return f"{len(samples)} path evolutions, all defects 0, no functor violations"


def criterion_4():
    details = []
    for head in (0, 1):
        g = build_multiway(TuringSystem(RULES), [TmConfig.from_tape(TAPE, head=head)], 4)
        want = golden(f"tm_multiway_h{head}_per_layer")
        got = multiway_payload(g)
        check(dumps(got) == dumps(want.payload), f"head {head}: payload differs from golden")
        details.append(f"head {head}: sizes {got['layer_sizes']}")
    return "; ".join(details)


def criterion_5():
    t0 = time.perf_counter()
    pairs = [(a, b) for a in range(5) for b in range(5)]
    graphs = [g for n in range(5) for g in itertools.combinations_with_replacement(pairs, n)]
    to_brute, to_cert = {}, {}
    for g in graphs:
        c, b = canonical_form(Hypergraph(g)).certificate, O.brute_canonical(g)
        check(to_brute.setdefault(c, b) == b and to_cert.setdefault(b, c) == c,
              f"disagreement on {g}")
    rng = random.Random(5)
    for _ in range(1000):
        g = [(rng.randrange(5), rng.randrange(5)) for _ in range(rng.randint(0, 4))]
        verts = sorted({v for e in g for v in e})
        lab = dict(zip(verts, rng.sample(range(50), len(verts))))
        h = [tuple(lab[v] for v in e) for e in g]
        rng.shuffle(h)
        other = [(rng.randrange(5), rng.randrange(5)) for _ in range(len(g))]
        check(canonical_form(Hypergraph(tuple(g))) == canonical_form(Hypergraph(tuple(h))),
              f"permuted copy of {g} not identified")
        same = O.brute_canonical(g) == O.brute_canonical(other)
        check((canonical_form(Hypergraph(tuple(g))) == canonical_form(Hypergraph(tuple(other)))) == same,
              f"{g} vs {other}")
    elapsed = time.perf_counter() - t0
    check(elapsed < 10.0, f"took {elapsed:.1f}s")
    return f"{len(graphs)} graphs ({len(to_cert)} classes) + 1000 random pairs agree, {elapsed:.1f}s"


def criterion_6():
    forms = {canonical_form(h) for _, h in successors([XY_XZ], DOUBLE_SELF_LOOP)}
    check(len(forms) == 1, f"{len(forms)} distinct successors")
    (cf,) = forms
    check(len(cf.graph.edges) == 4 and len(cf.graph.vertices) == 2, f"successor {cf.graph.edges}")
    want = golden("hg_xy_xz_double_self_loop").payload
    check([list(e) for e in cf.graph.edges] == want["step1"][0], "step-1 successor differs from oracle")
    g = build_multiway(HypergraphSystem([XY_XZ]), [DOUBLE_SELF_LOOP], 3)
    sizes = [len(layer) for layer in foliate(g)]
    check(sizes == want["layer_sizes"], f"layer sizes {sizes} vs oracle {want['layer_sizes']}")
    return f"step 1 -> {list(cf.graph.edges)}; layer sizes {sizes}"


def criterion_7():
    seen = []
    for pattern in ORTHOGONALITY:
        rep = report(orthogonality_graph(pattern))
        got = (rep.max_sequential > 0, any(p.defect > 0 for p in rep.parallel))
        check(got == pattern, f"system {pattern} realized {got}")
        check((rep.computationally_irreducible, rep.multicomputationally_irreducible)
              == (not pattern[0], not pattern[1]), f"verdicts for {pattern}")
        seen.append(got)
    check(len(set(seen)) == 4, "sign patterns not all distinct")
    return "(+,0) (0,+) (0,0) (+,+) realized with matching verdicts"


def criterion_8():
    graphs = all_graphs()
    for name, g in graphs:
        rep = report(g)
        check(rep.computationally_irreducible == rep.functor_laws.ok, f"{name}: sequential vs functor laws")
        check(rep.multicomputationally_irreducible == rep.monoidal_laws.ok, f"{name}: parallel vs monoidal laws")
    return f"{len(graphs)} systems consistent"


def criterion_9():
    cases = [(TuringSystem(RULES), TmConfig.from_tape(TAPE, head=h)) for h in (0, 1)]
    cases.append((HypergraphSystem([XY_XZ]), DOUBLE_SELF_LOOP))
    for system, init in cases:
        g = build_multiway(system, [init], 3)
        cg = causal_graph(g)
        check(is_acyclic(cg.events, cg.edges), "causal graph has a cycle")
        teg = token_event_graph(system, [init], 3)
        check(is_acyclic(*token_event_arcs(teg)), "token-event graph has a cycle")
        made = creator_counts(teg)
        for i, tok in enumerate(teg.tokens):
            check(made[i] == (0 if tok.creator < 0 else 1), f"token {i} has {made[i]} creators")
    single = token_event_graph(TuringSystem(RULES[:1]), [TmConfig.from_tape(TAPE)], 3)
    for t in range(4):
        kinds = {k for *_, k in glocal_branchial_graph(single, t).edges}
        check(kinds <= {SPATIAL}, f"layer {t} of a single branch has {kinds}")
    return "3 systems acyclic with unique creators; single branch spatial-only"


def criterion_10():
    configs = [
        RunConfig("tm multiway", rules=["2506,3506"], inits=["0,1,0,0"], depth=4),
        RunConfig("branchial", rules=["2506,3506"], inits=["0,1,0,0"], depth=4),
        RunConfig("tm multiway", rules=["2506,3506"], inits=["0,1,0,0"], head=1, depth=4, format="dot"),
        RunConfig("hg multiway", rules=["xy-xz"], inits=["double-self-loop"], depth=3),
        RunConfig("hg multiway", rules=["xy-xz"], inits=["double-self-loop"], depth=3, format="dot"),
    ]
    for cfg in configs:
        outs = []
        for threads in (1, 8):
            cfg.threads = threads
            outs.append(execute(cfg))
        check(outs[0] == outs[1], f"{cfg.command} differs between 1 and 8 threads")
    return f"{len(configs)} outputs byte-identical at 1 and 8 threads"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("fn", CRITERIA, ids=lambda f: f.__name__)
def test_acceptance(fn, acceptance_log):
    n = fn.__name__.split("_")[1]
    try:
        detail = fn()
    except AssertionError as exc:
        acceptance_log.append(f"FAIL criterion {n}: {exc}")
        raise
    acceptance_log.append(f"PASS criterion {n}: {detail}")


def main():
    t0 = time.perf_counter()
    failed = 0
    for fn in CRITERIA:
        n = fn.__name__.split("_")[1]
        try:
            print(f"PASS criterion {n}: {fn()}")
        except AssertionError as exc:
            failed += 1
            print(f"FAIL criterion {n}: {exc}")
    print(f"{len(CRITERIA) - failed}/{len(CRITERIA)} criteria passed in {time.perf_counter() - t0:.1f}s")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
