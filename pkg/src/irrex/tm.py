"""Canonically numbered Turing machines.

Rule numbers follow the usual mixed-radix convention: the number is written
with ``s*k`` digits in base ``2*s*k`` (most significant first), one digit per
case, with cases ordered by head state descending, then read color
descending.  A digit ``d`` means "go to state ``d // (2k) + 1``, write color
``(d // 2) % k``, move right if ``d`` is odd, left otherwise".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

LEFT, RIGHT = -1, 1


class Halted(Exception):
    """Raised by :func:`tm_step` on a configuration whose head state halts."""


@dataclass(frozen=True)
class TmSpec:
    states: int
    colors: int

    def __post_init__(self):
        if self.states < 1 or self.colors < 1:
            raise ValueError(f"need states >= 1 and colors >= 1, got {self.states}, {self.colors}")

    @property
    def radix(self) -> int:
        return 2 * self.states * self.colors

    @property
    def size(self) -> int:
        """Number of rules in the canonical enumeration."""
        return self.radix ** (self.states * self.colors)

    def cases(self) -> list[tuple[int, int]]:
        """(state, color) cases in digit order, most significant first."""
        return [(q, c) for q in range(self.states, 0, -1) for c in range(self.colors - 1, -1, -1)]


@dataclass(frozen=True)
class TmRule:
    spec: TmSpec
    table: Mapping[tuple[int, int], tuple[int, int, int]]
    halt_states: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        s, k = self.spec.states, self.spec.colors
        table = {tuple(case): tuple(out) for case, out in dict(self.table).items()}
        for (q, c) in self.spec.cases():
            if q in self.halt_states:
                continue
            if (q, c) not in table:
                raise ValueError(f"rule table has no entry for state {q}, color {c}")
        for (q, c), (q2, c2, d) in table.items():
            if not (1 <= q <= s and 0 <= c < k and 1 <= q2 <= s and 0 <= c2 < k):
                raise ValueError(f"rule case {(q, c)} -> {(q2, c2, d)} outside spec {s},{k}")
            if d not in (LEFT, RIGHT):
                raise ValueError(f"offset must be -1 or +1, got {d}")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "halt_states", frozenset(self.halt_states))

    def __hash__(self):
        return hash((self.spec, tuple(sorted(self.table.items())), self.halt_states))

    def to_json(self) -> dict:
        out = {
            "s": self.spec.states,
            "k": self.spec.colors,
            "cases": [
                {"state": q, "color": c, "to": list(self.table[q, c])}
                for (q, c) in sorted(self.table)
            ],
        }
        if self.halt_states:
            out["halt"] = sorted(self.halt_states)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "TmRule":
        spec = TmSpec(int(data["s"]), int(data["k"]))
        table = {}
        for case in data["cases"]:
            key = (int(case["state"]), int(case["color"]))
            if key in table:
                raise ValueError(f"duplicate rule case {key}")
            table[key] = tuple(int(v) for v in case["to"])
        return cls(spec, table, frozenset(int(q) for q in data.get("halt", ())))


def decode_rule(n: int, spec: TmSpec) -> TmRule:
    if not 0 <= n < spec.size:
        raise ValueError(f"rule number {n} out of range: must satisfy 0 <= n < {spec.size}")
    k = spec.colors
    cases = spec.cases()
    digits = []
    for _ in cases:
        n, d = divmod(n, spec.radix)
        digits.append(d)
    digits.reverse()
    table = {}
    for case, d in zip(cases, digits):
        table[case] = (d // (2 * k) + 1, (d // 2) % k, RIGHT if d % 2 else LEFT)
    return TmRule(spec, table)


def encode_rule(rule: TmRule) -> int:
    if rule.halt_states:
        raise ValueError("rules with halt states have no canonical number")
    k = rule.spec.colors
    n = 0
    for case in rule.spec.cases():
        q, c, d = rule.table[case]
        n = n * rule.spec.radix + (q - 1) * 2 * k + c * 2 + (1 if d == RIGHT else 0)
    return n


@dataclass(frozen=True)
class TmConfig:
    """Tape, head position and head state.

    ``tape`` accepts any mapping from position to color; it is stored as a
    sorted tuple of the nonzero cells, so blank cells never affect equality.
    """

    tape: tuple[tuple[int, int], ...]
    head: int
    state: int

    def __post_init__(self):
        tape = self.tape
        if isinstance(tape, Mapping):
            items = tape.items()
        else:
            items = tape
        cells = {}
        for pos, color in items:
            pos, color = int(pos), int(color)
            if color < 0:
                raise ValueError(f"negative color {color} at {pos}")
            if color:
                cells[pos] = color
            else:
                cells.pop(pos, None)
        object.__setattr__(self, "tape", tuple(sorted(cells.items())))

    @classmethod
    def from_tape(cls, colors: Iterable[int], head: int = 0, state: int = 1, offset: int = 0) -> "TmConfig":
        """Lay out ``colors`` from position ``offset`` rightwards."""
        return cls(tuple((offset + i, c) for i, c in enumerate(colors)), head, state)

    @property
    def cells(self) -> dict[int, int]:
        return dict(self.tape)

    def read(self, pos: int) -> int:
        for p, c in self.tape:
            if p == pos:
                return c
        return 0

    def to_json(self) -> dict:
        return {"tape": {str(p): c for p, c in self.tape}, "head": self.head, "state": self.state}

    @classmethod
    def from_json(cls, data: Mapping) -> "TmConfig":
        return cls(tuple((int(p), int(c)) for p, c in dict(data["tape"]).items()),
                   int(data["head"]), int(data["state"]))


def tm_step(rule: TmRule, cfg: TmConfig) -> TmConfig:
    if cfg.state in rule.halt_states:
        raise Halted(cfg)
    color = cfg.read(cfg.head)
    try:
        state, write, offset = rule.table[cfg.state, color]
    except KeyError:
        raise ValueError(f"no rule case for state {cfg.state}, color {color}") from None
    cells = cfg.cells
    cells[cfg.head] = write
    return TmConfig(tuple(cells.items()), cfg.head + offset, state)


class Trajectory(list):
    """List of configurations; ``halted`` is set when evolution stopped early."""

    halted: bool = False


def tm_evolve(rule: TmRule, cfg: TmConfig, steps: int) -> Trajectory:
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    out = Trajectory([cfg])
    for _ in range(steps):
        try:
            cfg = tm_step(rule, cfg)
        except Halted:
            out.halted = True
            break
        out.append(cfg)
    return out


def tm_canonical_key(cfg: TmConfig, translation_invariant: bool = False) -> bytes:
    """Deterministic serialization of a configuration.

    With ``translation_invariant`` positions are taken relative to the head,
    so configurations that differ by a whole-tape shift share a key.
    """
    shift = cfg.head if translation_invariant else 0
    cells = ",".join(f"{p - shift}:{c}" for p, c in cfg.tape)
    return f"q{cfg.state};h{cfg.head - shift};t{cells}".encode()
