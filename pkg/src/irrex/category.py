"""Free categories of evolution quivers, decorated with step complexity.

Morphisms are paths of the quiver and carry their step count and the layer
times they pass through.  :func:`zprime` sends each morphism to the discrete
interval between its endpoint times; that assignment is a functor exactly
when every path's step count matches the interval it spans.  Parallel
composition is strict: a tensor of morphisms is a multiset of components and
the unit is the empty multiset.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union


class CompositionError(ValueError):
    pass


class BoundRequired(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    objects: tuple[int, ...]
    arrows: tuple[tuple[str, int, int], ...]
    times: Mapping[int, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        objs = set(self.objects)
        for name, src, dst in self.arrows:
            if src not in objs or dst not in objs:
                raise ValueError(f"arrow {name} references unknown object")

    @classmethod
    def from_multiway(cls, g) -> "Quiver":
        return cls(tuple(s.id for s in g.states),
                   tuple((f"e{e.id}", e.source, e.target) for e in g.events),
                   g.times)

    def is_acyclic(self) -> bool:
        indeg = {o: 0 for o in self.objects}
        out = defaultdict(list)
        for _, src, dst in self.arrows:
            indeg[dst] += 1
            out[src].append(dst)
        ready = [o for o, d in indeg.items() if d == 0]
        seen = 0
        while ready:
            o = ready.pop()
            seen += 1
            for d in out[o]:
                indeg[d] -= 1
                if indeg[d] == 0:
                    ready.append(d)
        return seen == len(self.objects)


@dataclass(frozen=True, order=True)
class MorphismRecord:
    source: int
    target: int
    steps: int
    trace: tuple[int, ...]
    path: tuple[str, ...]

    def __post_init__(self):
        if self.steps != len(self.path) or len(self.trace) != self.steps + 1:
            raise ValueError("steps must equal path length and trace length steps + 1")

    @property
    def is_identity(self) -> bool:
        return self.steps == 0

    def to_json(self) -> dict:
        return {"src": self.source, "dst": self.target, "steps": self.steps,
                "trace": list(self.trace), "path": list(self.path)}


def identity(obj: int, time: int) -> MorphismRecord:
    return MorphismRecord(obj, obj, 0, (time,), ())


@dataclass(frozen=True)
class TensorRecord:
    """Parallel composite; equal to any reordering of its components."""

    components: tuple[MorphismRecord, ...]

    def _multiset(self):
        return tuple(sorted(self.components))

    def __eq__(self, other):
        if isinstance(other, MorphismRecord):
            return len(self.components) == 1 and self.components[0] == other
        if not isinstance(other, TensorRecord):
            return NotImplemented
        return self._multiset() == other._multiset()

    def __hash__(self):
        return hash(self._multiset())

    @property
    def sources(self) -> tuple[int, ...]:
        return tuple(sorted(c.source for c in self.components))

    @property
    def targets(self) -> tuple[int, ...]:
        return tuple(sorted(c.target for c in self.components))

    @property
    def steps(self) -> tuple[int, ...]:
        return tuple(c.steps for c in self.components)

    @property
    def total_steps(self) -> int:
        return sum(self.steps)


UNIT = TensorRecord(())

Record = Union[MorphismRecord, TensorRecord]


def tensor(*records: Record) -> Record:
    parts = []
    for r in records:
        parts.extend(r.components if isinstance(r, TensorRecord) else (r,))
    if len(parts) == 1:
        return parts[0]
    return TensorRecord(tuple(parts))


def compose(g: Record, f: Record) -> Record:
    """``g ∘ f``; tensors compose component by component, in order."""
    if isinstance(g, MorphismRecord) and isinstance(f, MorphismRecord):
        if f.target != g.source:
            raise CompositionError(f"cannot compose: target {f.target} != source {g.source}")
        if f.trace[-1] != g.trace[0]:
            raise CompositionError("shared object carries two different times")
        return MorphismRecord(f.source, g.target, f.steps + g.steps,
                              f.trace + g.trace[1:], f.path + g.path)
    gs = g.components if isinstance(g, TensorRecord) else (g,)
    fs = f.components if isinstance(f, TensorRecord) else (f,)
    if len(gs) != len(fs):
        raise CompositionError(f"tensor widths differ: {len(gs)} vs {len(fs)}")
    return tensor(*(compose(a, b) for a, b in zip(gs, fs)))


@dataclass
class FreeCategory:
    quiver: Quiver
    max_steps: int | None
    identities: dict[int, MorphismRecord]
    morphisms: list[MorphismRecord]
    """Non-identity composites, ordered by (steps, source, path)."""

    @property
    def times(self) -> Mapping[int, int]:
        return self.quiver.times

    @property
    def generators(self) -> list[MorphismRecord]:
        return [m for m in self.morphisms if m.steps == 1]

    def all_morphisms(self) -> list[MorphismRecord]:
        return list(self.identities.values()) + self.morphisms

    def hom(self, x: int, y: int) -> list[MorphismRecord]:
        return [m for m in self.all_morphisms() if m.source == x and m.target == y]

    def __contains__(self, m) -> bool:
        if m.is_identity:
            return self.identities.get(m.source) == m
        return m in self._index()

    def _index(self):
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = self.__dict__["_idx"] = set(self.morphisms)
        return idx

    def composable_pairs(self) -> Iterable[tuple[MorphismRecord, MorphismRecord]]:
        """Pairs (f, g) of non-identity morphisms whose composite g∘f is also enumerated."""
        by_source = defaultdict(list)
        for m in self.morphisms:
            by_source[m.source].append(m)
        for f in self.morphisms:
            for g in by_source[f.target]:
                if self.max_steps is None or f.steps + g.steps <= self.max_steps:
                    yield f, g


def free_category(q: Quiver, max_steps: int | None = None) -> FreeCategory:
    """All paths of at most ``max_steps`` arrows, plus an identity per object.

    ``max_steps=None`` takes the full closure, which only exists for acyclic
    quivers.
    """
    if max_steps is None:
        if not q.is_acyclic():
            raise BoundRequired("quiver has a cycle; a max-steps bound is required")
    elif max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    missing = [o for o in q.objects if o not in q.times]
    if missing:
        raise ValueError(f"objects without a layer time: {missing[:5]}")
    t = q.times
    out = defaultdict(list)
    for name, src, dst in q.arrows:
        out[src].append(MorphismRecord(src, dst, 1, (t[src], t[dst]), (name,)))

    morphisms = []
    layer = [m for o in q.objects for m in out[o]]
    while layer:
        morphisms.extend(layer)
        if max_steps is not None and layer[0].steps >= max_steps:
            break
        layer = [compose(g, f) for f in layer for g in out[f.target]]
    morphisms.sort(key=lambda m: (m.steps, m.source, m.path))
    identities = {o: identity(o, t[o]) for o in q.objects}
    return FreeCategory(q, max_steps, identities, morphisms)


# -- the discrete interval category --------------------------------------------


@dataclass(frozen=True, order=True)
class DiscreteInterval:
    lower: int
    upper: int

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")

    @property
    def cardinality(self) -> int:
        return self.upper - self.lower + 1

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(range(self.lower, self.upper + 1))

    @property
    def is_identity(self) -> bool:
        return self.lower == self.upper

    def union(self, other: "DiscreteInterval") -> "DiscreteInterval":
        """Union of two intervals that overlap or touch."""
        if self.lower > other.upper + 1 or other.lower > self.upper + 1:
            raise ValueError(f"intervals {self} and {other} are not contiguous")
        return DiscreteInterval(min(self.lower, other.lower), max(self.upper, other.upper))

    def after(self, first: "DiscreteInterval") -> "DiscreteInterval":
        """Composition ``self ∘ first``: glue at the shared endpoint."""
        if first.upper != self.lower:
            raise CompositionError(f"{first} does not end where {self} starts")
        return DiscreteInterval(first.lower, self.upper)

    def __str__(self):
        return f"[{self.lower}, {self.upper}]"


@dataclass(frozen=True)
class IntervalTensor:
    intervals: tuple[DiscreteInterval, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple(sorted(self.intervals)))

    def tensor(self, other: "IntervalTensor") -> "IntervalTensor":
        return IntervalTensor(self.intervals + other.intervals)


@dataclass
class FunctorData:
    """The object and morphism assignments of Z′ on one free category."""

    times: Mapping[int, int]
    morphism_map: dict[MorphismRecord, DiscreteInterval]
    reversed: set[MorphismRecord]
    """Morphisms going back in time; their interval is stored reversed."""

    def interval(self, m: MorphismRecord) -> DiscreteInterval:
        got = self.morphism_map.get(m)
        if got is None:
            a, b = self.times[m.source], self.times[m.target]
            got = DiscreteInterval(min(a, b), max(a, b))
        return got

    def image(self, r: Record):
        if isinstance(r, TensorRecord):
            return IntervalTensor(tuple(self.interval(c) for c in r.components))
        return self.interval(r)

    def is_functorial_on(self, m: MorphismRecord) -> bool:
        return m not in self.reversed and self.times[m.source] <= self.times[m.target]


def zprime(fc: FreeCategory, times: Mapping[int, int] | None = None) -> FunctorData:
    times = dict(fc.times if times is None else times)
    missing = [o for o in fc.quiver.objects if o not in times]
    if missing:
        raise ValueError(f"objects without a layer time: {missing[:5]}")
    mm, rev = {}, set()
    for m in fc.all_morphisms():
        a, b = times[m.source], times[m.target]
        if a > b:
            rev.add(m)
        mm[m] = DiscreteInterval(min(a, b), max(a, b))
    return FunctorData(times, mm, rev)


# -- law checks ----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    morphisms: tuple
    detail: str


@dataclass
class LawReport:
    checked: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def count(self) -> int:
        return len(self.violations)

    def add(self, kind, morphisms, detail):
        self.violations.append(Violation(kind, tuple(morphisms), detail))


def check_functor_laws(fd: FunctorData, fc: FreeCategory) -> LawReport:
    """Check that Z′ preserves identities and composition of the decorated category.

    A morphism's image must list exactly the step numbers its computation
    traverses; a path that takes more (or fewer) steps than its endpoints'
    times allow breaks composition.
    """
    rep = LawReport()
    for obj, idm in fc.identities.items():
        rep.checked += 1
        t = fd.times[obj]
        if fd.image(idm) != DiscreteInterval(t, t):
            rep.add("identity", (idm,), f"Z'(id_{obj}) = {fd.image(idm)}, expected {{{t}}}")
    for m in fc.generators:
        rep.checked += 1
        if not fd.is_functorial_on(m):
            rep.add("order", (m,), f"{m.path[0]} runs backwards in time {m.trace}")
        elif fd.interval(m).elements != m.trace:
            rep.add("generator", (m,), f"{m.path[0]} spans {m.trace}, image {fd.interval(m)}")
    for f, g in fc.composable_pairs():
        rep.checked += 1
        h = compose(g, f)
        try:
            glued = fd.interval(g).after(fd.interval(f))
        except CompositionError:
            glued = None
        if not (fd.is_functorial_on(f) and fd.is_functorial_on(g)) or glued != fd.interval(h):
            rep.add("composition", (f, g), f"Z'(g)∘Z'(f) is not Z'(g∘f) for {h.path}")
        elif glued.elements != h.trace:
            rep.add("composition", (f, g),
                    f"{h.path} takes {h.steps} steps but spans {glued}")
    return rep


def check_monoidal_laws(records: Sequence[Record], fd: FunctorData) -> LawReport:
    """Check strict monoidality of Z′ on tensored morphisms.

    For every tensor, the image must be the multiset of component images,
    and the target object must really be the tensor of the component
    targets.  When two components land on the same (merged) state the
    realized target holds fewer time slots than the components deliver, which
    is reported once per offending pair.
    """
    rep = LawReport()
    rep.checked += 1
    if fd.image(UNIT) != IntervalTensor(()):
        rep.add("unit", (), "Z'(unit) is not the empty multiset")
    for r in records:
        parts = r.components if isinstance(r, TensorRecord) else (r,)
        rep.checked += 1
        expected = IntervalTensor(tuple(fd.interval(c) for c in parts))
        got = fd.image(r)
        if isinstance(got, DiscreteInterval):
            got = IntervalTensor((got,))
        if got != expected:
            rep.add("tensor", parts, "Z'(f⊗g) differs from Z'(f)⊕Z'(g)")
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                if parts[i].target == parts[j].target:
                    rep.add("merge", (parts[i], parts[j]),
                            f"{parts[i].path} and {parts[j].path} both reach state {parts[i].target}")
    return rep
