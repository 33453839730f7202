"""Graphviz DOT rendering for evolution, branchial, causal, glocal and category graphs."""

from __future__ import annotations

from .category import FreeCategory
from .multiway import (
    BranchialGraph, CausalGraph, GlocalBranchialGraph, MultiwayGraph, TokenEventGraph,
)
from .tm import TmConfig

STYLES = ("evolution", "branchial", "causal", "glocal")


def _q(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _state_label(value) -> str:
    if isinstance(value, TmConfig):
        cells = value.cells
        lo = min([value.head, *cells])
        hi = max([value.head, *cells])
        tape = "".join(str(cells.get(p, 0)) for p in range(lo, hi + 1))
        return f"q{value.state}@{value.head - lo} {tape}"
    edges = getattr(value, "edges", None)
    if edges is not None:
        return "{" + ",".join("{" + ",".join(map(str, e)) + "}" for e in edges) + "}"
    return repr(value)


def _render(nodes, edges, name="G") -> str:
    lines = [f"digraph {name} {{"]
    lines += [f"  {n};" for n in nodes]
    lines += [f"  {e};" for e in edges]
    return "\n".join(lines) + "\n}\n"


def _attrs(**kw) -> str:
    return "[" + ", ".join(f"{k}={_q(v)}" for k, v in kw.items()) + "]"


def evolution_dot(g: MultiwayGraph) -> str:
    ordered = sorted(g.states, key=lambda s: (s.layer, s.key))
    nodes = [f"s{s.id} " + _attrs(label=_state_label(s.value), layer=s.layer) for s in ordered]
    edges = [f"s{e.source} -> s{e.target} " + _attrs(color="gray", label=e.label)
             for e in sorted(g.events, key=lambda e: e.id)]
    return _render(nodes, edges)


def branchial_dot(bg: BranchialGraph, g: MultiwayGraph | None = None) -> str:
    values = {s.id: s.value for s in g.states} if g is not None else {}
    nodes = [f"s{v} " + _attrs(label=_state_label(values[v]) if v in values else f"s{v}")
             for v in bg.vertices]
    edges = [f"s{a} -> s{b} " + _attrs(dir="none", kind="branchial") for a, b in bg.edges]
    return _render(nodes, edges)


def causal_dot(cg: CausalGraph, g: MultiwayGraph | None = None) -> str:
    labels = {e.id: e.label for e in g.events} if g is not None else {}
    nodes = [f"e{i} " + _attrs(label=labels.get(i, f"e{i}"), shape="box") for i in cg.events]
    edges = [f"e{a} -> e{b} " + _attrs(kind="causal", label="causal") for a, b in cg.edges]
    return _render(nodes, edges)


def glocal_dot(teg: TokenEventGraph, layers: list[GlocalBranchialGraph] = ()) -> str:
    nodes = [f"t{i} " + _attrs(label=str(tok.value), shape="ellipse") for i, tok in enumerate(teg.tokens)]
    nodes += [f"e{e.id} " + _attrs(label=e.label, shape="box") for e in teg.events]
    edges = [f"t{a} -> e{b} " + _attrs(kind="token") for a, b in teg.ingestion]
    edges += [f"e{a} -> t{b} " + _attrs(kind="token") for a, b in teg.egestion]
    for gb in layers:
        edges += [f"t{a} -> t{b} " + _attrs(dir="none", kind=kind, layer=gb.layer)
                  for a, b, kind in gb.edges]
    return _render(nodes, edges)


def category_dot(fc: FreeCategory) -> str:
    times = fc.times
    nodes = [f"s{o} " + _attrs(label=f"s{o}", layer=times.get(o, 0)) for o in fc.quiver.objects]
    edges = []
    for m in fc.all_morphisms():
        trace = "[" + ",".join(map(str, m.trace)) + "]"
        edges.append(f"s{m.source} -> s{m.target} " + _attrs(label=f"{m.steps} {trace}",
                                                             path=".".join(m.path)))
    return _render(nodes, edges)


def export_dot(graph, style: str = "evolution", context=None) -> str:
    """Render ``graph`` in one of :data:`STYLES`.

    ``context`` supplies the multiway graph for state and event labels
    (branchial, causal) or the glocal branchial layers (glocal).
    """
    if graph is None:
        return _render([], [])
    if style == "evolution":
        if isinstance(graph, FreeCategory):
            return category_dot(graph)
        return evolution_dot(graph)
    if style == "branchial":
        return branchial_dot(graph, context)
    if style == "causal":
        return causal_dot(graph, context)
    if style == "glocal":
        return glocal_dot(graph, context or ())
    raise ValueError(f"unknown DOT style {style!r}; expected one of {STYLES}")
