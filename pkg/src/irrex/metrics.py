"""Additivity defects of sequential and parallel composition.

The sequential defect of a composite is how many steps longer it is than the
shortest route between its endpoints in the evolution graph.  The parallel
defect of a layer is how many of its events land on a state some other event
of the layer already reached, i.e. the sum of (indegree - 1) over the next
layer.  Pure branching costs nothing.
"""

from __future__ import annotations

from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction

from .category import (
    FreeCategory, LawReport, MorphismRecord, Quiver, TensorRecord,
    check_functor_laws, check_monoidal_laws, free_category, tensor, zprime,
)
from .multiway import MultiwayGraph, foliate


class ConsistencyError(RuntimeError):
    """An internal invariant failed; this indicates a bug, not bad input."""


@dataclass(frozen=True)
class SequentialDefect:
    composite: MorphismRecord
    shortest: int
    defect: int


@dataclass(frozen=True)
class ParallelDefect:
    layer: int
    branch_events: int
    distinct_successors: int
    defect: int


def _distances(g: MultiwayGraph, sources) -> dict[int, dict[int, int]]:
    out = defaultdict(set)
    for e in g.events:
        out[e.source].add(e.target)
    dist = {}
    for s in sources:
        d = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in out[u]:
                if v not in d:
                    d[v] = d[u] + 1
                    queue.append(v)
        dist[s] = d
    return dist


def sequential_defects(g: MultiwayGraph, fc: FreeCategory) -> list[SequentialDefect]:
    dist = _distances(g, sorted({m.source for m in fc.morphisms}))
    out = []
    for m in fc.morphisms:
        d = dist[m.source].get(m.target)
        if d is None:
            raise ConsistencyError(f"morphism {m.path} ends at a state unreachable in the graph")
        out.append(SequentialDefect(m, d, m.steps - d))
    return out


def parallel_defects(g: MultiwayGraph) -> list[ParallelDefect]:
    layer_of = g.times
    events = defaultdict(list)
    for e in g.events:
        events[layer_of[e.source]].append(e.target)
    out = []
    for t in range(g.depth):
        targets = events[t]
        distinct = len(set(targets))
        out.append(ParallelDefect(t, len(targets), distinct, len(targets) - distinct))
    return out


def layer_tensors(g: MultiwayGraph) -> list[TensorRecord]:
    """Per layer, the parallel composite of every event leaving it."""
    t = g.times
    by_layer = defaultdict(list)
    for e in g.events:
        rec = MorphismRecord(e.source, e.target, 1, (t[e.source], t[e.target]), (f"e{e.id}",))
        by_layer[t[e.source]].append(rec)
    out = []
    for layer in range(g.depth):
        r = tensor(*by_layer[layer])
        out.append(r if isinstance(r, TensorRecord) else TensorRecord((r,)))
    return out


@dataclass
class DefectReport:
    sequential: list[SequentialDefect]
    parallel: list[ParallelDefect]
    functor_laws: LawReport
    monoidal_laws: LawReport
    histogram: dict[int, int] = field(init=False)

    def __post_init__(self):
        self.histogram = dict(sorted(Counter(d.defect for d in self.sequential).items()))

    @property
    def max_sequential(self) -> int:
        return max((d.defect for d in self.sequential), default=0)

    @property
    def mean_sequential(self) -> Fraction:
        if not self.sequential:
            return Fraction(0)
        return Fraction(sum(d.defect for d in self.sequential), len(self.sequential))

    @property
    def computationally_irreducible(self) -> bool:
        return all(d.defect == 0 for d in self.sequential)

    @property
    def multicomputationally_irreducible(self) -> bool:
        return all(d.defect == 0 for d in self.parallel)

    @property
    def consistent(self) -> bool:
        return (self.computationally_irreducible == self.functor_laws.ok
                and self.multicomputationally_irreducible == self.monoidal_laws.ok)

    def to_json(self) -> dict:
        mean = self.mean_sequential
        return {
            "sequential": {
                "count": len(self.sequential),
                "max": self.max_sequential,
                "mean": f"{mean.numerator}/{mean.denominator}",
                "hist": {str(k): v for k, v in self.histogram.items()},
            },
            "parallel": [
                {"t": p.layer, "events": p.branch_events,
                 "successors": p.distinct_successors, "defect": p.defect}
                for p in self.parallel
            ],
            "functor_violations": self.functor_laws.count,
            "monoidal_violations": self.monoidal_laws.count,
            "verdicts": {
                "computationally_irreducible": self.computationally_irreducible,
                "multicomputationally_irreducible": self.multicomputationally_irreducible,
            },
        }


def report(g: MultiwayGraph, fc: FreeCategory | None = None,
           max_steps: int | None = None) -> DefectReport:
    """Both defect families plus the law checks they should agree with.

    Without ``fc`` the free category is enumerated up to ``max_steps``
    (default: the graph's depth).
    """
    if fc is None:
        fc = free_category(Quiver.from_multiway(g), max_steps or max(g.depth, 1))
    fd = zprime(fc)
    return DefectReport(
        sequential_defects(g, fc),
        parallel_defects(g),
        check_functor_laws(fd, fc),
        check_monoidal_laws(layer_tensors(g), fd),
    )


def layer_sizes(g: MultiwayGraph) -> list[int]:
    return [len(layer) for layer in foliate(g)]
