"""Multiway evolution graphs and the graphs derived from them.

A system plugs in through a small adapter (see :class:`SystemAdapter`); the
concrete adapters for Turing machines, hypergraph rewriting and explicit
transition tables live in :mod:`irrex.systems`.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Hashable, Mapping, Protocol, Sequence

PER_LAYER = "per-layer"
GLOBAL = "global"
DEDUP_MODES = (PER_LAYER, GLOBAL)
INITIAL = -1


class UnsupportedSystem(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    """One successor of a state.

    ``consumed`` names tokens of the source state, ``produced`` tokens of the
    target.  ``carry`` maps each remaining target token to the source token it
    continues; ``None`` means token names are stable across the step.
    """

    label: str
    target: Any
    consumed: tuple[Hashable, ...] = ()
    produced: tuple[Hashable, ...] = ()
    carry: Mapping[Hashable, Hashable] | None = None


@dataclass(frozen=True)
class LocalEvent:
    """One event of the token-level (glocal) construction.

    ``consumed`` indexes into the branch's token values; ``materialized`` are
    initial tokens brought into scope by the event (and consumed by it).
    """

    label: str
    consumed: tuple[int, ...]
    produced: tuple[Hashable, ...]
    materialized: tuple[Hashable, ...] = ()


class SystemAdapter(Protocol):
    has_tokens: bool

    def prepare(self, state) -> Any: ...

    def key(self, state) -> bytes: ...

    def successors(self, state) -> list[Transition]: ...


# -- multiway graph ----------------------------------------------------------


@dataclass(frozen=True)
class State:
    id: int
    key: bytes
    layer: int
    value: Any = field(compare=False)


@dataclass(frozen=True)
class Event:
    id: int
    source: int
    target: int
    label: str
    layer: int
    consumed: tuple = ()
    produced: tuple = ()
    carry: Mapping | None = field(default=None, compare=False)


@dataclass
class MultiwayGraph:
    states: list[State]
    events: list[Event]
    mode: str
    depth: int
    initial: tuple[int, ...]
    has_tokens: bool = False

    @property
    def times(self) -> dict[int, int]:
        return {s.id: s.layer for s in self.states}

    def out_events(self) -> dict[int, list[Event]]:
        out = defaultdict(list)
        for e in self.events:
            out[e.source].append(e)
        return out

    def in_events(self) -> dict[int, list[Event]]:
        out = defaultdict(list)
        for e in self.events:
            out[e.target].append(e)
        return out

    def witnesses(self) -> list[Event]:
        """Events that do not advance the time function by exactly one."""
        t = self.times
        return [e for e in self.events if t[e.target] - t[e.source] != 1]

    def __eq__(self, other):
        if not isinstance(other, MultiwayGraph):
            return NotImplemented
        return (self.states, self.events, self.mode, self.depth, self.initial) == (
            other.states, other.events, other.mode, other.depth, other.initial)


def build_multiway(system: SystemAdapter, inits: Sequence, depth: int,
                   mode: str = PER_LAYER, threads: int = 1) -> MultiwayGraph:
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    if not inits:
        raise ValueError("at least one initial state is required")
    if mode not in DEDUP_MODES:
        raise ValueError(f"dedup mode must be one of {DEDUP_MODES}, got {mode!r}")

    states: list[State] = []
    events: list[Event] = []
    seen: dict[bytes, int] = {}        # global mode: key -> state id
    layer_index: dict[bytes, int] = {}  # current layer: key -> state id

    def add_layer(pending: dict[bytes, Any], t: int) -> list[int]:
        ids = []
        for key in sorted(pending):
            sid = len(states)
            states.append(State(sid, key, t, pending[key]))
            ids.append(sid)
            if mode == GLOBAL:
                seen[key] = sid
        return ids

    pending = {}
    for s in inits:
        s = system.prepare(s)
        pending.setdefault(system.key(s), s)
    frontier = add_layer(pending, 0)
    initial = tuple(frontier)

    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for t in range(depth):
            values = [states[i].value for i in frontier]
            if pool is not None:
                results = list(pool.map(system.successors, values))
            else:
                results = [system.successors(v) for v in values]
            steps = []
            for sid, transitions in zip(frontier, results):
                for tr in transitions:
                    steps.append((states[sid].key, tr.label, sid, tr))
            steps.sort(key=lambda x: (x[0], x[1]))

            pending = {}
            keyed = []
            for _, _, sid, tr in steps:
                key = system.key(tr.target)
                keyed.append((sid, tr, key))
                if mode == GLOBAL and key in seen:
                    continue
                pending.setdefault(key, tr.target)
            new_ids = add_layer(pending, t + 1)
            layer_index = {states[i].key: i for i in new_ids}
            for sid, tr, key in keyed:
                target = seen[key] if mode == GLOBAL else layer_index[key]
                events.append(Event(len(events), sid, target, tr.label, t,
                                    tuple(tr.consumed), tuple(tr.produced), tr.carry))
            frontier = new_ids
    finally:
        if pool is not None:
            pool.shutdown()
    return MultiwayGraph(states, events, mode, depth, initial, getattr(system, "has_tokens", False))


def foliate(g: MultiwayGraph) -> list[list[int]]:
    """Layers Σ_0..Σ_depth of state ids, by first-seen time."""
    layers = [[] for _ in range(g.depth + 1)]
    for s in g.states:
        layers[s.layer].append(s.id)
    return layers


# -- branchial graphs --------------------------------------------------------


@dataclass(frozen=True)
class BranchialGraph:
    layer: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


def branchial_graph(g: MultiwayGraph, t: int, radius: int = 1) -> BranchialGraph:
    """States of Σ_t joined when they share an ancestor at most ``radius`` layers back."""
    layers = foliate(g)
    if not 0 <= t < len(layers):
        raise ValueError(f"layer {t} outside 0..{g.depth}")
    if radius < 1:
        raise ValueError("radius must be >= 1")
    vertices = tuple(layers[t])
    if t == 0:
        return BranchialGraph(0, vertices, ())
    times = g.times
    parents = defaultdict(set)
    for e in g.events:
        if times[e.target] == times[e.source] + 1:
            parents[e.target].add(e.source)
    edges = set()
    frontier = {v: {v} for v in vertices}
    for _ in range(min(radius, t)):
        # frontier[v]: ancestors of v exactly k layers back
        frontier = {v: set().union(*(parents[u] for u in anc)) for v, anc in frontier.items()}
        for a, b in combinations(vertices, 2):
            if frontier[a] & frontier[b]:
                edges.add((a, b))
    return BranchialGraph(t, vertices, tuple(sorted(edges)))


# -- causal graph ------------------------------------------------------------


@dataclass(frozen=True)
class CausalGraph:
    events: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


def _token_creators(g: MultiwayGraph) -> dict[int, dict[Hashable, frozenset[int]]]:
    """For each state, the events that may have created each of its tokens.

    Tokens absent from a state's dict were created by no event (initial).
    """
    creators: dict[int, dict[Hashable, frozenset[int]]] = {}
    incoming = g.in_events()
    initial = frozenset((INITIAL,))
    for s in sorted(g.states, key=lambda s: (s.layer, s.id)):
        arriving = incoming.get(s.id, [])
        names = set()
        for e in arriving:
            names.update(e.produced)
            names.update(creators[e.source] if e.carry is None else e.carry)
        found = {}
        for tok in names:
            who = set()
            for e in arriving:
                src = creators[e.source]
                if tok in e.produced:
                    who.add(e.id)
                elif e.carry is None:
                    if tok not in e.consumed:
                        who.update(src.get(tok, initial))
                elif tok in e.carry:
                    who.update(src.get(e.carry[tok], initial))
            if who and who != initial:
                found[tok] = frozenset(who)
        creators[s.id] = found
    return creators


def causal_graph(g: MultiwayGraph) -> CausalGraph:
    """Events linked when one consumes a token the other produced."""
    if not g.has_tokens:
        raise UnsupportedSystem("system does not report consumed/produced tokens")
    if g.mode != PER_LAYER:
        raise UnsupportedSystem("causal graphs need per-layer deduplication")
    creators = _token_creators(g)
    edges = set()
    for e in g.events:
        src = creators[e.source]
        for tok in e.consumed:
            for c in src.get(tok, ()):
                if c != INITIAL:
                    edges.add((c, e.id))
    return CausalGraph(tuple(e.id for e in g.events), tuple(sorted(edges)))


# -- glocal construction -----------------------------------------------------


@dataclass(frozen=True, order=True)
class Token:
    creator: int
    index: int
    value: Hashable


@dataclass(frozen=True)
class GlocalEvent:
    id: int
    label: str
    layer: int
    consumed: tuple[int, ...]
    produced: tuple[int, ...]


@dataclass
class TokenEventGraph:
    tokens: list[Token]
    events: list[GlocalEvent]
    branches: list[list[tuple[int, ...]]]
    """Per layer, the token-id sets of the distinct branch states."""
    slots: list[Hashable]

    @property
    def ingestion(self) -> list[tuple[int, int]]:
        return [(tok, e.id) for e in self.events for tok in e.consumed]

    @property
    def egestion(self) -> list[tuple[int, int]]:
        return [(e.id, tok) for e in self.events for tok in e.produced]

    def creator(self, tok: int) -> int:
        return self.tokens[tok].creator


def token_event_graph(system, inits: Sequence, depth: int) -> TokenEventGraph:
    if not hasattr(system, "local_events"):
        raise UnsupportedSystem("system has no token decomposition")
    token_ids: dict[Token, int] = {}
    tokens: list[Token] = []
    events: list[GlocalEvent] = []
    event_ids: dict[tuple, int] = {}

    def intern(tok: Token) -> int:
        if tok not in token_ids:
            token_ids[tok] = len(tokens)
            tokens.append(tok)
        return token_ids[tok]

    layer0 = set()
    for state in inits:
        branch = [Token(INITIAL, i, v) for i, v in enumerate(system.initial_tokens(state))]
        layer0.add(tuple(sorted(branch)))
    branches = [sorted(layer0)]
    for t in range(depth):
        nxt = set()
        for branch in branches[t]:
            values = [tok.value for tok in branch]
            for le in system.local_events(values):
                consumed = [branch[i] for i in le.consumed]
                consumed += [Token(INITIAL, INITIAL, v) for v in le.materialized]
                key = (le.label, tuple(sorted(consumed)), tuple(le.produced))
                if key not in event_ids:
                    eid = len(events)
                    event_ids[key] = eid
                    produced = [Token(eid, j, v) for j, v in enumerate(le.produced)]
                    events.append(GlocalEvent(
                        eid, le.label, t,
                        tuple(intern(tok) for tok in sorted(consumed)),
                        tuple(intern(tok) for tok in produced),
                    ))
                ev = events[event_ids[key]]
                gone = set(le.consumed)
                rest = [tok for i, tok in enumerate(branch) if i not in gone]
                produced = [tokens[i] for i in ev.produced]
                nxt.add(tuple(sorted(rest + produced)))
        branches.append(sorted(nxt))
    for layer in branches:
        for branch in layer:
            for tok in branch:
                intern(tok)
    slot = getattr(system, "slot", lambda value: None)
    return TokenEventGraph(
        tokens, events,
        [[tuple(sorted(token_ids[tok] for tok in b)) for b in layer] for layer in branches],
        [slot(tok.value) for tok in tokens],
    )


SPATIAL = "spatial"
BRANCHIAL = "branchial"


@dataclass(frozen=True)
class GlocalBranchialGraph:
    layer: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, str], ...]


def glocal_branchial_graph(teg: TokenEventGraph, t: int) -> GlocalBranchialGraph:
    """Tokens live at layer ``t``, joined spatially (same branch) or branchially.

    Tokens with a slot (a tape cell, the head) are branchial partners when
    they fill the same slot on different branches; slotless tokens are
    partners when their creating events competed for a common token.
    """
    if not 0 <= t < len(teg.branches):
        raise ValueError(f"layer {t} outside 0..{len(teg.branches) - 1}")
    layer = teg.branches[t]
    live = sorted({tok for b in layer for tok in b})
    together = set()
    for b in layer:
        together.update(combinations(b, 2))
    consumed_by = {e.id: set(e.consumed) for e in teg.events}
    edges = []
    for a, b in combinations(live, 2):
        if (a, b) in together:
            edges.append((a, b, SPATIAL))
            continue
        sa, sb = teg.slots[a], teg.slots[b]
        if sa is not None or sb is not None:
            if sa == sb:
                edges.append((a, b, BRANCHIAL))
            continue
        ca, cb = teg.creator(a), teg.creator(b)
        if ca != INITIAL and cb != INITIAL and ca != cb and consumed_by[ca] & consumed_by[cb]:
            edges.append((a, b, BRANCHIAL))
    return GlocalBranchialGraph(t, tuple(live), tuple(edges))
