"""Adapters that plug concrete systems into :func:`irrex.multiway.build_multiway`."""

from __future__ import annotations

from typing import Hashable, Mapping, Sequence

from .hypergraph import CanonicalForm, Hypergraph, RewriteRule, canonical_form, successors
from .multiway import LocalEvent, Transition
from .tm import TmConfig, TmRule, tm_canonical_key, tm_step

HEAD = "head"


class TuringSystem:
    """Several Turing machine rules applied side by side to one tape.

    Tokens are the head, named ``"head"``, and the tape cells, named
    ``("cell", position)``.  Every step consumes and re-emits the head and the
    cell under it.
    """

    has_tokens = True

    def __init__(self, rules: Sequence[TmRule], translation_invariant: bool = False):
        if not rules:
            raise ValueError("at least one rule is required")
        self.rules = list(rules)
        self.translation_invariant = translation_invariant

    def prepare(self, cfg: TmConfig) -> TmConfig:
        return cfg

    def key(self, cfg: TmConfig) -> bytes:
        return tm_canonical_key(cfg, self.translation_invariant)

    def successors(self, cfg: TmConfig) -> list[Transition]:
        out = []
        touched = (HEAD, ("cell", cfg.head))
        for i, rule in enumerate(self.rules):
            if cfg.state in rule.halt_states:
                continue
            out.append(Transition(f"rule:{i}", tm_step(rule, cfg), touched, touched))
        return out

    # token-level view: values are ("head", state, pos) and ("cell", pos, color)

    def initial_tokens(self, cfg: TmConfig) -> list[tuple]:
        return [(HEAD, cfg.state, cfg.head)] + [("cell", p, c) for p, c in cfg.tape]

    def slot(self, value) -> Hashable:
        return HEAD if value[0] == HEAD else ("cell", value[1])

    def local_events(self, values: Sequence[tuple]) -> list[LocalEvent]:
        head_idx = next(i for i, v in enumerate(values) if v[0] == HEAD)
        _, state, pos = values[head_idx]
        cell_idx = next((i for i, v in enumerate(values) if v[0] == "cell" and v[1] == pos), None)
        if cell_idx is None:
            consumed, materialized, color = (head_idx,), (("cell", pos, 0),), 0
        else:
            consumed, materialized, color = (head_idx, cell_idx), (), values[cell_idx][2]
        out = []
        for i, rule in enumerate(self.rules):
            if state in rule.halt_states:
                continue
            q, c, d = rule.table[state, color]
            out.append(LocalEvent(f"rule:{i}", consumed,
                                  (("cell", pos, c), (HEAD, q, pos + d)), materialized))
        return out

    @staticmethod
    def assemble(values: Sequence[tuple]) -> TmConfig:
        head = next(v for v in values if v[0] == HEAD)
        return TmConfig(tuple((v[1], v[2]) for v in values if v[0] == "cell"), head[2], head[1])


class HypergraphSystem:
    """Set-substitution rules; states are kept in canonical form.

    Tokens are edge occurrences, named by their index in the canonical edge
    list.
    """

    has_tokens = True

    def __init__(self, rules: Sequence[RewriteRule]):
        self.rules = list(rules)
        self._forms: dict[Hypergraph, CanonicalForm] = {}

    def _canon(self, h: Hypergraph) -> CanonicalForm:
        cf = self._forms.get(h)
        if cf is None:
            cf = self._forms[h] = canonical_form(h)
        return cf

    def prepare(self, h: Hypergraph) -> Hypergraph:
        return self._canon(h).graph

    def key(self, h: Hypergraph) -> bytes:
        return self._canon(h).certificate

    def successors(self, h: Hypergraph) -> list[Transition]:
        out = []
        for event, result in successors(self.rules, h):
            cf = self._canon(result)
            order = cf.edge_order
            out.append(Transition(
                event.label, cf.graph,
                event.consumed,
                tuple(sorted(order[i] for i in event.produced)),
                {order[j]: src for j, src in enumerate(event.kept)},
            ))
        return out

    def initial_tokens(self, h: Hypergraph) -> list[tuple]:
        return list(h.edges)

    def local_events(self, values: Sequence[tuple]) -> list[LocalEvent]:
        host = Hypergraph(tuple(values))
        out = []
        for event, result in successors(self.rules, host):
            binding = ",".join(f"{k}={v}" for k, v in event.match.binding)
            out.append(LocalEvent(
                f"rule:{event.rule};match:{binding}", event.consumed,
                tuple(result.edges[i] for i in event.produced),
            ))
        return out

    @staticmethod
    def assemble(values: Sequence[tuple]) -> Hypergraph:
        return Hypergraph(tuple(values))


class TableSystem:
    """An abstract rewriting system given as an explicit successor table.

    ``table`` maps a state to the list of its successors; the i-th successor
    is labelled ``rule:i``.  Handy for hand-built examples.
    """

    has_tokens = False

    def __init__(self, table: Mapping[Hashable, Sequence[Hashable]]):
        self.table = {k: list(v) for k, v in table.items()}

    def prepare(self, state):
        return state

    def key(self, state) -> bytes:
        return repr(state).encode()

    def successors(self, state) -> list[Transition]:
        return [Transition(f"rule:{i}", t) for i, t in enumerate(self.table.get(state, ()))]
