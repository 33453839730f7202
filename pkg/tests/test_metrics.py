from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from corpus import (
    ORTHOGONALITY, XY_XZ, all_graphs, lasso_graph, orthogonality_graph, random_path_evolutions,
    tm_path_graph, two_rules_one_successor,
)
from irrex.category import Quiver, free_category
from irrex.hypergraph import DOUBLE_SELF_LOOP
from irrex.io import dumps
from irrex.metrics import (
    ConsistencyError, layer_tensors, parallel_defects, report, sequential_defects,
)
from irrex.multiway import GLOBAL, PER_LAYER, build_multiway
from irrex.systems import HypergraphSystem, TableSystem, TuringSystem
from irrex.tm import TmConfig


def test_shortcut_has_sequential_defect_one():
    g = orthogonality_graph((True, False))
    fc = free_category(Quiver.from_multiway(g))
    defects = {m.composite.path: m.defect for m in sequential_defects(g, fc)}
    assert max(defects.values()) == 1
    assert sorted(defects.values()) == [0, 0, 0, 1]


def test_two_rules_one_successor_has_parallel_defect_one():
    pd = parallel_defects(two_rules_one_successor())
    assert [(p.branch_events, p.distinct_successors, p.defect) for p in pd] == [(2, 1, 1)]


def test_pure_branching_is_free():
    g = build_multiway(TableSystem({"X": ["A", "B", "C"]}), ["X"], 1)
    assert [p.defect for p in parallel_defects(g)] == [0]


@pytest.mark.parametrize("pattern", list(ORTHOGONALITY))
def test_orthogonality_patterns(pattern):
    rep = report(orthogonality_graph(pattern))
    seq, par = pattern
    assert (rep.max_sequential > 0, any(p.defect for p in rep.parallel)) == pattern
    assert rep.computationally_irreducible == (not seq)
    assert rep.multicomputationally_irreducible == (not par)
    assert rep.consistent


def test_hypergraph_parallel_defects_match_census(golden):
    g = build_multiway(HypergraphSystem([XY_XZ]), [DOUBLE_SELF_LOOP], 3)
    assert [p.defect for p in parallel_defects(g)] == golden("hg_xy_xz_double_self_loop").payload["parallel_defects"]


@pytest.mark.parametrize("head", [0, 1])
def test_sequential_histogram_matches_oracle(golden, rules_2506_3506, head):
    g = build_multiway(TuringSystem(rules_2506_3506), [TmConfig.from_tape([0, 1, 0, 0], head=head)], 4, GLOBAL)
    rep = report(g)
    want = golden(f"tm_multiway_h{head}_global").payload["sequential_hist"]
    assert {str(k): v for k, v in rep.histogram.items()} == want


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.sampled_from("ABCDEF"), st.lists(st.sampled_from("ABCDEF"), max_size=3), max_size=6),
       st.integers(1, 4), st.booleans())
def test_defects_nonnegative_and_match_oracle(table, depth, glob):
    g = build_multiway(TableSystem(table), ["A"], depth, GLOBAL if glob else PER_LAYER)
    rep = report(g)
    assert all(d.defect >= 0 for d in rep.sequential)
    assert all(p.defect >= 0 for p in rep.parallel)
    arcs = [(e.source, e.target) for e in g.events]
    want = O.sequential_histogram([s.id for s in g.states], arcs, depth) if arcs else {}
    assert rep.histogram == want
    assert rep.consistent


def test_random_deterministic_paths_are_irreducible():
    for n, tape, steps in random_path_evolutions(30, seed=3):
        rep = report(tm_path_graph(n, tape, steps))
        assert rep.max_sequential == 0 and rep.functor_laws.ok


def test_lasso_is_reducible():
    rep = report(lasso_graph())
    assert rep.max_sequential > 0 and not rep.functor_laws.ok and rep.consistent


@pytest.mark.parametrize("name,g", all_graphs(), ids=lambda x: x if isinstance(x, str) else "")
def test_cross_module_consistency(name, g):
    rep = report(g)
    assert rep.computationally_irreducible == rep.functor_laws.ok
    assert rep.multicomputationally_irreducible == rep.monoidal_laws.ok


def test_layer_tensors_cover_all_events(rules_2506_3506):
    g = build_multiway(TuringSystem(rules_2506_3506), [TmConfig.from_tape([0, 1, 0, 0], head=1)], 4)
    tensors = layer_tensors(g)
    assert len(tensors) == 4
    assert sum(len(t.components) for t in tensors) == len(g.events)


def test_report_json_is_integral():
    rep = report(orthogonality_graph((True, True)))
    data = rep.to_json()
    text = dumps(data)
    assert isinstance(data["sequential"]["mean"], str)
    assert Fraction(data["sequential"]["mean"]) == rep.mean_sequential
    assert data["verdicts"] == {"computationally_irreducible": False, "multicomputationally_irreducible": False}
    assert text.endswith("\n")


def test_unreachable_endpoint_is_a_consistency_error():
    g = orthogonality_graph((False, False))
    other = build_multiway(TableSystem({"P": ["Q"], "Q": ["R"], "R": ["S"], "S": ["T"], "T": ["U"]}), ["P"], 5)
    fc = free_category(Quiver.from_multiway(other))
    with pytest.raises(ConsistencyError):
        sequential_defects(g, fc)


def test_bound_defaults_to_depth():
    g = orthogonality_graph((False, False))
    assert max(d.composite.steps for d in report(g).sequential) == g.depth
    assert max(d.composite.steps for d in report(g, max_steps=1).sequential) == 1
