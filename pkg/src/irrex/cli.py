"""Command-line front end: ``irrex <command> [options]``.

Examples::

    irrex tm evolve --rule 2506 --spec 2,2 --init 0,1,0,0 --steps 4
    irrex tm multiway --rules 2506,3506 --init 0,1,0,0 --depth 4 --format dot
    irrex hg multiway --rule rule.json --init double-self-loop --depth 3
    irrex report --system tm --rules 2506,3506 --init 0,1,0,0 --depth 4 --dedup global

Exit status is 0 on success, 1 on a usage error and 2 when an internal
consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from . import io
from .category import BoundRequired, Quiver, free_category
from .dot import export_dot
from .hypergraph import (
    DOUBLE_SELF_LOOP, Hypergraph, RewriteRule, apply_match, canonical_form, find_matches,
)
from .metrics import ConsistencyError, report
from .multiway import (
    DEDUP_MODES, PER_LAYER, branchial_graph, build_multiway, causal_graph,
    glocal_branchial_graph, token_event_graph,
)
from .systems import HypergraphSystem, TuringSystem
from .tm import TmConfig, TmRule, TmSpec, decode_rule, tm_evolve

COMMANDS = (
    "tm evolve", "tm multiway", "hg rewrite", "hg matches", "hg multiway", "hg canon",
    "branchial", "causal", "glocal", "category", "report",
)
NAMED_INITS = {"double-self-loop": DOUBLE_SELF_LOOP}
NAMED_RULES = {
    "xy-xz": RewriteRule((("x", "y"), ("x", "z")), (("x", "z"), ("x", "w"), ("y", "w"), ("z", "w"))),
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    system: str = "tm"
    rules: list[str] = field(default_factory=list)
    spec: str = "2,2"
    inits: list[str] = field(default_factory=list)
    head: int = 0
    steps: int = 4
    depth: int = 3
    dedup: str = PER_LAYER
    layer: int | None = None
    radius: int = 1
    max_steps: int | None = None
    match: int = 0
    translation_invariant: bool = False
    format: str = "json"
    out: str | None = None
    threads: int = 1
    seed: int | None = None

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise UsageError(f"command: unknown command {self.command!r}")
        group = self.command.split()[0]
        if group in ("tm", "hg"):
            self.system = group
        if self.system not in ("tm", "hg"):
            raise UsageError(f"system: expected 'tm' or 'hg', got {self.system!r}")
        if self.dedup not in DEDUP_MODES:
            raise UsageError(f"dedup: expected one of {', '.join(DEDUP_MODES)}, got {self.dedup!r}")
        if self.format not in ("json", "dot"):
            raise UsageError(f"format: expected 'json' or 'dot', got {self.format!r}")
        for name in ("steps", "depth"):
            if not isinstance(getattr(self, name), int) or getattr(self, name) < 0:
                raise UsageError(f"{name}: must be a nonnegative integer")
        if not isinstance(self.threads, int) or self.threads < 1:
            raise UsageError("threads: must be a positive integer")
        if self.radius < 1:
            raise UsageError("radius: must be >= 1")
        if self.max_steps is not None and self.max_steps < 1:
            raise UsageError("max_steps: must be >= 1")
        if self.command != "hg canon" and not self.rules:
            raise UsageError("rules: at least one rule is required")
        if not self.inits:
            raise UsageError("inits: an initial state is required")
        return self

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        clean = {}
        for k, v in data.items():
            name = k.replace("-", "_")
            if name not in known:
                raise UsageError(f"{k}: unknown config field")
            clean[name] = v
        if "command" not in clean:
            raise UsageError("command: missing config field")
        return cls(**clean)


# -- input parsing ---------------------------------------------------------------


def _load_json(text: str, what: str):
    p = Path(text)
    try:
        if not text.lstrip().startswith(("{", "[")) and p.exists():
            return json.loads(p.read_text())
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"{what}: cannot read {text!r}: {exc}") from None


def _parse_spec(text: str) -> TmSpec:
    try:
        s, k = (int(x) for x in text.split(","))
        return TmSpec(s, k)
    except ValueError as exc:
        raise UsageError(f"spec: expected 'states,colors', got {text!r} ({exc})") from None


def tm_rules(cfg: RunConfig) -> list[TmRule]:
    spec = _parse_spec(cfg.spec)
    out = []
    for item in cfg.rules:
        if all(part.strip().isdigit() for part in item.split(",")):
            for part in item.split(","):
                try:
                    out.append(decode_rule(int(part), spec))
                except ValueError as exc:
                    raise UsageError(f"rules: {exc}") from None
            continue
        data = _load_json(item, "rules")
        for d in data if isinstance(data, list) else [data]:
            try:
                out.append(TmRule.from_json(d))
            except (KeyError, TypeError, ValueError) as exc:
                raise UsageError(f"rules: bad rule table ({exc})") from None
    return out


def hg_rules(cfg: RunConfig) -> list[RewriteRule]:
    out = []
    for item in cfg.rules:
        if item in NAMED_RULES:
            out.append(NAMED_RULES[item])
            continue
        data = _load_json(item, "rules")
        for d in data if isinstance(data, list) else [data]:
            try:
                out.append(RewriteRule.from_json(d))
            except (KeyError, TypeError, ValueError) as exc:
                raise UsageError(f"rules: bad rewrite rule ({exc})") from None
    return out


def tm_inits(cfg: RunConfig) -> list[TmConfig]:
    out = []
    for item in cfg.inits:
        try:
            if item.strip().lstrip("-").replace(",", "").isdigit():
                out.append(TmConfig.from_tape([int(c) for c in item.split(",")], head=cfg.head))
            else:
                out.append(TmConfig.from_json(_load_json(item, "inits")))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"inits: bad Turing machine configuration {item!r} ({exc})") from None
    return out


def hg_inits(cfg: RunConfig) -> list[Hypergraph]:
    out = []
    for item in cfg.inits:
        if item in NAMED_INITS:
            out.append(NAMED_INITS[item])
            continue
        try:
            out.append(Hypergraph.from_json(_load_json(item, "inits")))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"inits: bad hypergraph {item!r} ({exc})") from None
    return out


def make_system(cfg: RunConfig):
    if cfg.system == "tm":
        return TuringSystem(tm_rules(cfg), cfg.translation_invariant), tm_inits(cfg)
    return HypergraphSystem(hg_rules(cfg)), hg_inits(cfg)


# -- pipelines ---------------------------------------------------------------------


def _layers(cfg: RunConfig, depth: int) -> list[int]:
    if cfg.layer is None:
        return list(range(depth + 1))
    if not 0 <= cfg.layer <= depth:
        raise UsageError(f"layer: must lie in 0..{depth}")
    return [cfg.layer]


def _json_only(cfg: RunConfig):
    if cfg.format != "json":
        raise UsageError(f"format: {cfg.command} only produces json")


def execute(cfg: RunConfig) -> str:
    """Run the pipeline selected by ``cfg`` and return the output text."""
    cfg.validate()
    cmd = cfg.command

    if cmd == "tm evolve":
        rules = tm_rules(cfg)
        if len(rules) != 1:
            raise UsageError("rules: tm evolve takes exactly one rule")
        init = tm_inits(cfg)[0]
        if cfg.format == "dot":
            g = build_multiway(TuringSystem(rules), [init], cfg.steps, PER_LAYER)
            return export_dot(g, "evolution")
        traj = tm_evolve(rules[0], init, cfg.steps)
        return io.dumps(io.evolution_to_json(traj, traj.halted))

    if cmd in ("hg matches", "hg rewrite", "hg canon"):
        _json_only(cfg)
        host = hg_inits(cfg)[0]
        if cmd == "hg canon":
            cf = canonical_form(host)
            return io.dumps({"edges": cf.graph.to_json()["edges"], "certificate": cf.hex,
                             "labeling": {str(k): v for k, v in sorted(cf.labeling.items())}})
        rules = hg_rules(cfg)
        if cmd == "hg matches":
            return io.dumps({"matches": [
                {"rule": i, "edges": list(m.edges), "binding": dict(m.binding)}
                for i, r in enumerate(rules) for m in find_matches(r, host)]})
        history = [host]
        for _ in range(cfg.steps):
            ms = find_matches(rules[0], history[-1])
            if not ms:
                break
            history.append(apply_match(rules[0], history[-1], ms[min(cfg.match, len(ms) - 1)]))
        return io.dumps({"states": [h.to_json() for h in history]})

    system, inits = make_system(cfg)

    if cmd == "glocal":
        try:
            teg = token_event_graph(system, inits, cfg.depth)
        except ValueError as exc:
            raise UsageError(f"system: {exc}") from None
        layers = [glocal_branchial_graph(teg, t) for t in _layers(cfg, cfg.depth)]
        if cfg.format == "dot":
            return export_dot(teg, "glocal", layers)
        return io.dumps(io.glocal_to_json(teg, layers))

    if cmd == "causal" and cfg.dedup != PER_LAYER:
        raise UsageError("dedup: causal graphs need per-layer deduplication")
    g = build_multiway(system, inits, cfg.depth, cfg.dedup, cfg.threads)

    if cmd in ("tm multiway", "hg multiway"):
        if cfg.format == "dot":
            return export_dot(g, "evolution")
        return io.dumps(io.graph_to_json(g, cfg.system))
    if cmd == "branchial":
        bgs = [branchial_graph(g, t, cfg.radius) for t in _layers(cfg, cfg.depth)]
        if cfg.format == "dot":
            return "".join(export_dot(b, "branchial", g) for b in bgs)
        return io.dumps(io.branchial_to_json(bgs))
    if cmd == "causal":
        cg = causal_graph(g)
        if cfg.format == "dot":
            return export_dot(cg, "causal", g)
        return io.dumps(io.causal_to_json(cg, g))
    if cmd == "category":
        try:
            fc = free_category(Quiver.from_multiway(g), cfg.max_steps)
        except BoundRequired as exc:
            raise UsageError(f"max_steps: {exc}") from None
        if cfg.format == "dot":
            return export_dot(fc, "evolution")
        return io.dumps(io.category_to_json(fc))
    # report
    _json_only(cfg)
    rep = report(g, max_steps=cfg.max_steps)
    if not rep.consistent:
        raise ConsistencyError("defect verdicts disagree with the law checks")
    return io.dumps(rep.to_json())


def run(cfg: RunConfig) -> int:
    try:
        text = execute(cfg)
    except UsageError as exc:
        print(f"irrex: error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"irrex: internal consistency error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# -- argument parsing ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--config", help="JSON file with the same fields as the flags")
    p.add_argument("--system", choices=("tm", "hg"))
    p.add_argument("--rule", "--rules", dest="rules", action="append",
                   help="TM rule numbers (comma separated) or a JSON rule/path; repeatable")
    p.add_argument("--spec", help="TM 'states,colors' (default 2,2)")
    p.add_argument("--init", dest="inits", action="append",
                   help="initial state: TM tape like 0,1,0,0, a named graph, or JSON/path; repeatable")
    p.add_argument("--head", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--dedup", choices=DEDUP_MODES)
    p.add_argument("--layer", type=int)
    p.add_argument("--radius", type=int)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--match", type=int, help="index of the match to apply (hg rewrite)")
    p.add_argument("--translation-invariant", action="store_true", default=None)
    p.add_argument("--format", choices=("json", "dot"))
    p.add_argument("--out")
    p.add_argument("--threads", type=int)
    p.add_argument("--seed", type=int)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="irrex", description="Multiway evolution and irreducibility analysis.")
    sub = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    for group, actions in (("tm", ("evolve", "multiway")),
                           ("hg", ("rewrite", "matches", "multiway", "canon"))):
        gp = sub.add_parser(group)
        gsub = gp.add_subparsers(dest="action", required=True, parser_class=_Parser)
        for a in actions:
            gsub.add_parser(a, parents=[common])
    for name in ("branchial", "causal", "glocal", "category", "report"):
        sub.add_parser(name, parents=[common])
    return parser


def config_from_argv(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    command = ns.group if getattr(ns, "action", None) is None else f"{ns.group} {ns.action}"
    given = {k: v for k, v in vars(ns).items()
             if v is not None and k not in ("group", "action", "config")}
    data = {}
    if ns.config:
        try:
            data = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"config: cannot read {ns.config}: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config: top level must be an object")
        data = {k.replace("-", "_"): v for k, v in data.items()}
        for k in ("rules", "inits"):
            if isinstance(data.get(k), str):
                data[k] = [data[k]]
    data.update(given)
    data["command"] = command
    return RunConfig.from_dict(data)


def main(argv=None) -> int:
    try:
        cfg = config_from_argv(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"irrex: error: {exc}", file=sys.stderr)
        return 1
    except TypeError as exc:
        print(f"irrex: error: config: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
