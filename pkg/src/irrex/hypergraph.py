"""Ordered hypergraphs, canonical labeling and set-substitution rewriting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

Edge = tuple[int, ...]
PatternEdge = tuple[str, ...]


class InvalidMatch(ValueError):
    pass


@dataclass(frozen=True)
class Hypergraph:
    edges: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple(tuple(int(v) for v in e) for e in self.edges)
        for e in edges:
            if not e:
                raise ValueError("hyperedges must be nonempty")
            if any(v < 0 for v in e):
                raise ValueError(f"vertex identifiers must be nonnegative: {e}")
        object.__setattr__(self, "edges", edges)

    @property
    def vertices(self) -> list[int]:
        return sorted({v for e in self.edges for v in e})

    def __len__(self):
        return len(self.edges)

    def to_json(self) -> dict:
        return {"edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data) -> "Hypergraph":
        if isinstance(data, Mapping):
            data = data["edges"]
        return cls(tuple(tuple(e) for e in data))


DOUBLE_SELF_LOOP = Hypergraph(((0, 0), (0, 0)))


@dataclass(frozen=True)
class RewriteRule:
    lhs: tuple[PatternEdge, ...]
    rhs: tuple[PatternEdge, ...]

    def __post_init__(self):
        lhs = tuple(tuple(str(v) for v in e) for e in self.lhs)
        rhs = tuple(tuple(str(v) for v in e) for e in self.rhs)
        if not lhs:
            raise ValueError("rule left-hand side must be nonempty")
        if any(not e for e in lhs + rhs):
            raise ValueError("pattern edges must be nonempty")
        object.__setattr__(self, "lhs", lhs)
        object.__setattr__(self, "rhs", rhs)

    @property
    def shared(self) -> frozenset[str]:
        return frozenset(_vars(self.lhs)) & frozenset(_vars(self.rhs))

    @property
    def fresh(self) -> list[str]:
        """Right-hand-side variables not bound by the left, in first-appearance order."""
        bound = set(_vars(self.lhs))
        return [v for v in _vars(self.rhs) if v not in bound]

    def to_json(self) -> dict:
        return {"lhs": [list(e) for e in self.lhs], "rhs": [list(e) for e in self.rhs]}

    @classmethod
    def from_json(cls, data: Mapping) -> "RewriteRule":
        return cls(tuple(tuple(e) for e in data["lhs"]), tuple(tuple(e) for e in data["rhs"]))


def _vars(pattern: Iterable[PatternEdge]) -> list[str]:
    seen = {}
    for e in pattern:
        for v in e:
            seen.setdefault(v, None)
    return list(seen)


def reverse_rule(rule: RewriteRule) -> RewriteRule:
    return RewriteRule(rule.rhs, rule.lhs)


# -- canonical labeling -----------------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    graph: Hypergraph
    certificate: bytes
    labeling: Mapping[int, int]
    edge_order: tuple[int, ...]
    """``edge_order[i]`` is the position of input edge ``i`` in ``graph``."""

    def __eq__(self, other):
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        return self.certificate == other.certificate

    def __hash__(self):
        return hash(self.certificate)

    @property
    def hex(self) -> str:
        return self.certificate.hex()


def _refine(edges: Sequence[Edge], incidence, cells: list[list[int]]) -> list[list[int]]:
    """Split cells until every vertex in a cell sees the same edge patterns."""
    while True:
        where = {v: i for i, cell in enumerate(cells) for v in cell}
        new_cells = []
        for i, cell in enumerate(cells):
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sig = {}
            for v in cell:
                sig[v] = sorted(
                    (len(edges[ei]), pos, tuple(where[u] for u in edges[ei]))
                    for ei, pos in incidence[v]
                )
            groups = {}
            for v in cell:
                groups.setdefault(tuple(map(tuple, sig[v])), []).append(v)
            for key in sorted(groups):
                new_cells.append(groups[key])
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def canonical_form(h: Hypergraph) -> CanonicalForm:
    edges = h.edges
    verts = h.vertices
    incidence = {v: [] for v in verts}
    for ei, e in enumerate(edges):
        for pos, v in enumerate(e):
            incidence[v].append((ei, pos))

    best = None

    def search(cells):
        nonlocal best
        cells = _refine(edges, incidence, cells)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            label = {cell[0]: i for i, cell in enumerate(cells)}
            relabeled = sorted((tuple(label[v] for v in e), ei) for ei, e in enumerate(edges))
            candidate = [e for e, _ in relabeled]
            if best is None or candidate < best[0]:
                best = (candidate, label, [ei for _, ei in relabeled])
            return
        cell = cells[target]
        for v in cell:
            rest = [u for u in cell if u != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search([list(verts)] if verts else [])
    if best is None:
        best = ([], {}, [])
    canon_edges, label, order = best
    edge_order = [0] * len(order)
    for new_pos, ei in enumerate(order):
        edge_order[ei] = new_pos
    cert = ";".join(",".join(map(str, e)) for e in canon_edges).encode()
    return CanonicalForm(Hypergraph(tuple(canon_edges)), cert, label, tuple(edge_order))


def is_isomorphic(h1: Hypergraph, h2: Hypergraph) -> bool:
    if len(h1.edges) != len(h2.edges) or len(h1.vertices) != len(h2.vertices):
        return False
    return canonical_form(h1).certificate == canonical_form(h2).certificate


# -- matching and rewriting -------------------------------------------------


@dataclass(frozen=True)
class Match:
    edges: tuple[int, ...]
    """Host edge index for each left-hand-side pattern edge, in rule order."""
    binding: tuple[tuple[str, int], ...]

    def __post_init__(self):
        binding = self.binding
        if isinstance(binding, Mapping):
            binding = binding.items()
        object.__setattr__(self, "binding", tuple(sorted(binding)))

    @property
    def sort_key(self):
        return (tuple(sorted(self.edges)), self.binding)

    def __eq__(self, other):
        if not isinstance(other, Match):
            return NotImplemented
        return self.sort_key == other.sort_key

    def __hash__(self):
        return hash(self.sort_key)

    @property
    def mapping(self) -> dict[str, int]:
        return dict(self.binding)

    def describe(self) -> str:
        edges = ",".join(map(str, sorted(self.edges)))
        binding = ",".join(f"{k}={v}" for k, v in self.binding)
        return f"{edges}|{binding}"


def find_matches(rule: RewriteRule, host: Hypergraph) -> list[Match]:
    found = {}
    lhs = rule.lhs
    chosen: list[int] = []

    def extend(i, binding):
        if i == len(lhs):
            m = Match(tuple(chosen), binding)
            found.setdefault(m, m)
            return
        pattern = lhs[i]
        for ei, e in enumerate(host.edges):
            if ei in chosen or len(e) != len(pattern):
                continue
            new = dict(binding)
            ok = True
            for var, v in zip(pattern, e):
                if new.setdefault(var, v) != v:
                    ok = False
                    break
            if ok:
                chosen.append(ei)
                extend(i + 1, new)
                chosen.pop()

    extend(0, {})
    return sorted(found.values(), key=lambda m: m.sort_key)


def _check_match(rule: RewriteRule, host: Hypergraph, m: Match) -> dict[str, int]:
    if len(m.edges) != len(rule.lhs) or len(set(m.edges)) != len(m.edges):
        raise InvalidMatch(f"match must select {len(rule.lhs)} distinct edges, got {m.edges}")
    binding = m.mapping
    for pattern, ei in zip(rule.lhs, m.edges):
        if not 0 <= ei < len(host.edges):
            raise InvalidMatch(f"edge index {ei} out of range")
        e = host.edges[ei]
        if len(e) != len(pattern) or any(binding.get(var) != v for var, v in zip(pattern, e)):
            raise InvalidMatch(f"pattern {pattern} does not match host edge {e} under {binding}")
    if set(binding) != set(_vars(rule.lhs)):
        raise InvalidMatch("binding must cover exactly the left-hand-side variables")
    return binding


def apply_match(rule: RewriteRule, host: Hypergraph, m: Match) -> Hypergraph:
    return _rewrite(rule, host, m)[0]


def _rewrite(rule, host, m):
    binding = _check_match(rule, host, m)
    selected = set(m.edges)
    residual = [e for ei, e in enumerate(host.edges) if ei not in selected]
    top = max((v for e in host.edges for v in e), default=-1)
    for i, var in enumerate(rule.fresh):
        binding[var] = top + 1 + i
    produced = [tuple(binding[v] for v in e) for e in rule.rhs]
    return Hypergraph(tuple(residual + produced)), [ei for ei in range(len(host.edges)) if ei not in selected]


@dataclass(frozen=True)
class RewriteEvent:
    rule: int
    match: Match
    consumed: tuple[int, ...]
    """Host edge indices removed by the rewrite."""
    produced: tuple[int, ...]
    """Result edge indices created by the rewrite."""
    kept: tuple[int, ...]
    """Host index of each residual edge, in result order."""

    @property
    def label(self) -> str:
        return f"rule:{self.rule};match:{self.match.describe()}"


def successors(rules: Sequence[RewriteRule], host: Hypergraph) -> list[tuple[RewriteEvent, Hypergraph]]:
    out = []
    for ri, rule in enumerate(rules):
        for m in find_matches(rule, host):
            result, kept = _rewrite(rule, host, m)
            event = RewriteEvent(
                ri, m, tuple(sorted(m.edges)),
                tuple(range(len(kept), len(result.edges))), tuple(kept),
            )
            out.append((event, result))
    return out


def dual_hypergraph(h: Hypergraph) -> Hypergraph:
    """Swap the roles of vertices and edges: one edge per vertex, listing the edges through it."""
    return Hypergraph(tuple(
        tuple(ei for ei, e in enumerate(h.edges) if v in e) for v in h.vertices
    ))
