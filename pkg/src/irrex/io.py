"""JSON serialization and the golden-file harness.

All payloads are integers, strings, booleans, lists and dicts; ``dumps``
produces the canonical text (sorted keys, compact separators, trailing
newline) so that equal payloads are equal byte strings.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .category import FreeCategory
from .hypergraph import Hypergraph
from .metrics import DefectReport
from .multiway import (
    BranchialGraph, CausalGraph, Event, GlocalBranchialGraph, MultiwayGraph, State,
    TokenEventGraph,
)
from .tm import TmConfig


def _check(obj, where="$"):
    if isinstance(obj, float):
        raise TypeError(f"floating-point value at {where}; payloads must be integral")
    if isinstance(obj, dict):
        for k, v in obj.items():
            if not isinstance(k, str):
                raise TypeError(f"non-string key {k!r} at {where}")
            _check(v, f"{where}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _check(v, f"{where}[{i}]")


def dumps(obj: Any) -> str:
    _check(obj)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def canonicalize(text: str) -> str:
    return dumps(json.loads(text))


# -- states and tokens ---------------------------------------------------------


def state_payload(value) -> Any:
    if isinstance(value, (TmConfig, Hypergraph)):
        return value.to_json()
    if value is None or isinstance(value, (str, int, bool)):
        return value
    if isinstance(value, tuple):
        return [state_payload(v) for v in value]
    return repr(value)


def _tuplify(x):
    if isinstance(x, list):
        return tuple(_tuplify(v) for v in x)
    return x


def _token_json(name):
    if isinstance(name, tuple):
        return [_token_json(v) for v in name]
    return name


def _state_value(system: str, payload):
    if system == "tm":
        return TmConfig.from_json(payload)
    if system == "hg":
        return Hypergraph.from_json(payload)
    return _tuplify(payload)


# -- multiway graphs -----------------------------------------------------------


def graph_to_json(g: MultiwayGraph, system: str = "table") -> dict:
    return {
        "system": system,
        "mode": g.mode,
        "depth": g.depth,
        "initial": list(g.initial),
        "has_tokens": g.has_tokens,
        "states": [
            {"id": s.id, "key": s.key.hex(), "layer": s.layer, "state": state_payload(s.value)}
            for s in g.states
        ],
        "events": [
            {"id": e.id, "from": e.source, "to": e.target, "label": e.label, "layer": e.layer,
             "consumed": _token_json(e.consumed), "produced": _token_json(e.produced)}
            for e in g.events
        ],
    }


def graph_from_json(data: dict) -> MultiwayGraph:
    system = data.get("system", "table")
    states = [State(s["id"], bytes.fromhex(s["key"]), s["layer"], _state_value(system, s.get("state")))
              for s in data["states"]]
    events = [Event(e["id"], e["from"], e["to"], e["label"], e["layer"],
                    _tuplify(e.get("consumed", [])), _tuplify(e.get("produced", [])))
              for e in data["events"]]
    return MultiwayGraph(states, events, data["mode"], data["depth"], tuple(data["initial"]),
                         data.get("has_tokens", False))


def evolution_to_json(trajectory, halted: bool = False) -> dict:
    return {"configs": [c.to_json() for c in trajectory], "halted": halted}


def branchial_to_json(bgs: list[BranchialGraph]) -> dict:
    return {"layers": [{"t": b.layer, "vertices": list(b.vertices), "edges": [list(e) for e in b.edges]}
                       for b in bgs]}


def causal_to_json(cg: CausalGraph, g: MultiwayGraph) -> dict:
    labels = {e.id: e.label for e in g.events}
    return {
        "events": [{"id": i, "label": labels[i]} for i in cg.events],
        "edges": [{"from": a, "to": b, "kind": "causal"} for a, b in cg.edges],
    }


def glocal_to_json(teg: TokenEventGraph, layers: list[GlocalBranchialGraph]) -> dict:
    return {
        "tokens": [{"id": i, "creator": t.creator, "index": t.index, "value": _token_json(t.value)}
                   for i, t in enumerate(teg.tokens)],
        "events": [{"id": e.id, "label": e.label, "layer": e.layer,
                    "consumed": list(e.consumed), "produced": list(e.produced)} for e in teg.events],
        "branches": [[list(b) for b in layer] for layer in teg.branches],
        "branchial": [{"t": gb.layer, "vertices": list(gb.vertices),
                       "edges": [[a, b, kind] for a, b, kind in gb.edges]} for gb in layers],
    }


def category_to_json(fc: FreeCategory) -> dict:
    times = fc.times
    return {
        "objects": [{"id": o, "layer": times.get(o, 0)} for o in fc.quiver.objects],
        "max_steps": fc.max_steps,
        "morphisms": [m.to_json() for m in fc.all_morphisms()],
    }


def report_to_json(r: DefectReport) -> dict:
    return r.to_json()


# -- golden files --------------------------------------------------------------


def digest(config: dict) -> str:
    return hashlib.sha256(dumps(config).encode()).hexdigest()


@dataclass(frozen=True)
class GoldenFile:
    config: dict
    payload: Any

    @property
    def digest(self) -> str:
        return digest(self.config)

    def to_text(self) -> str:
        return dumps({"config": self.config, "digest": self.digest, "payload": self.payload})

    @classmethod
    def load(cls, path) -> "GoldenFile":
        data = json.loads(Path(path).read_text())
        g = cls(data["config"], data["payload"])
        if data.get("digest") != g.digest:
            raise ValueError(f"{path}: digest does not match its config")
        return g

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    def matches(self, payload: Any) -> bool:
        """Byte-exact comparison after canonical normalization."""
        return dumps(self.payload) == dumps(payload)
