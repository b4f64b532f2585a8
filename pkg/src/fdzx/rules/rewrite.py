"""Site-directed rule application and script replay.

A site maps every node of the rule's source side to a node of the host.  The
matched nodes are cut out as one box and the other side is spliced in with
fresh node ids; unmatched host nodes keep their ids, so later script steps can
keep referring to them.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..diagram import Box, Diagram, DiagramError, Node, substitute, validate
from ..report import jsonable
from ..semantics import DEFAULT_TOL, interpret, tensor_equal
from ..serialize import SchemaError
from .base import RuleInstance, decode_params, get_rule, instantiate, normalize_direction

PARAM_TOL = 1e-12


class SiteMismatchError(DiagramError):
    """The named site does not match the rule's source side."""


class ReplayError(RuntimeError):
    """A script step failed; ``step`` is 1-based and ``log`` holds the steps so far."""

    def __init__(self, message: str, step: int, log: list[dict], semantic: bool):
        super().__init__(message)
        self.step = step
        self.log = log
        self.semantic = semantic


def _close(x, y) -> bool:
    if isinstance(x, (list, tuple)) and isinstance(y, (list, tuple)):
        return len(x) == len(y) and all(_close(a, b) for a, b in zip(x, y))
    if isinstance(x, complex) or isinstance(y, complex):
        return abs(complex(x) - complex(y)) <= PARAM_TOL * max(1.0, abs(complex(x)), abs(complex(y)))
    return x == y


def nodes_match(pattern: Node, host: Node) -> bool:
    if type(pattern) is not type(host):
        return False
    pp, hp = pattern.params(), host.params()
    return pp.keys() == hp.keys() and all(_close(pp[k], hp[k]) for k in pp)


def _match(host: Diagram, src: Diagram, site: Mapping[int, int]):
    """Check the site; return (box inputs feeds, box output consumers)."""
    site = {int(k): int(v) for k, v in site.items()}
    if set(site) != set(src.nodes):
        missing = sorted(set(src.nodes) - set(site))
        extra = sorted(set(site) - set(src.nodes))
        raise SiteMismatchError(
            f"site must map every rule node: missing {missing}, unknown {extra}"
        )
    if len(set(site.values())) != len(site):
        raise SiteMismatchError("site is not injective")
    for s, h in sorted(site.items()):
        if h not in host.nodes:
            raise SiteMismatchError(f"host has no node {h} (rule node {s})")
        if not nodes_match(src.nodes[s], host.nodes[h]):
            raise SiteMismatchError(
                f"rule node {s} ({src.nodes[s].kind} {jsonable(src.nodes[s].params())}) does not "
                f"match host node {h} ({host.nodes[h].kind} {jsonable(host.nodes[h].params())})"
            )
    matched = set(site.values())
    inverse = {h: s for s, h in site.items()}
    src_consumers = src.consumers()
    host_consumers = host.consumers()

    for tgt, s_src in sorted(src.wires.items(), key=repr):
        if tgt[0] == "out" and s_src[0] == "in":
            raise SiteMismatchError("rule sides with bare boundary-to-boundary wires cannot be matched")
        if tgt[0] != "out" and s_src[0] != "in":
            h_tgt = (site[tgt[0]], tgt[1])
            if host.wires[h_tgt] != (site[s_src[0]], s_src[1]):
                raise SiteMismatchError(
                    f"rule wire {s_src}->{tgt} is not host wire "
                    f"{(site[s_src[0]], s_src[1])}->{h_tgt}"
                )

    feeds = []
    for i in range(len(src.inputs)):
        s_tgt = src_consumers[("in", i)]
        h_src = host.wires[(site[s_tgt[0]], s_tgt[1])]
        if h_src[0] != "in" and h_src[0] in matched:
            # the rule's own output loops back into its input
            back = (inverse[h_src[0]], h_src[1])
            outs = [j for j in range(len(src.outputs)) if src.wires[("out", j)] == back]
            if not outs:
                raise SiteMismatchError(
                    f"rule input {i} is fed by matched host node {h_src[0]}, not by the boundary"
                )
            feeds.append(("box", outs[0]))
        else:
            feeds.append(h_src)
    consumers = []
    for j in range(len(src.outputs)):
        s_src = src.wires[("out", j)]
        h_tgt = host_consumers[(site[s_src[0]], s_src[1])]
        if h_tgt[0] != "out" and h_tgt[0] in matched:
            fwd = (inverse[h_tgt[0]], h_tgt[1])
            ins = [i for i in range(len(src.inputs)) if src_consumers[("in", i)] == fwd]
            if not ins:
                raise SiteMismatchError(
                    f"rule output {j} feeds matched host node {h_tgt[0]}, not the boundary"
                )
            consumers.append(("box", ins[0]))
        else:
            consumers.append(h_tgt)
    return site, feeds, consumers


def apply_with_ids(
    host: Diagram, site: Mapping[int, int], inst: RuleInstance, direction: str = "lr"
) -> tuple[Diagram, list[int]]:
    """Like :func:`apply`, also returning the ids of the spliced-in nodes."""
    src, dst = inst.side(direction)
    if src.calculus != host.calculus:
        raise SiteMismatchError(f"{inst.rule} is a {src.calculus} rule, host is {host.calculus}")
    if not src.nodes:
        raise SiteMismatchError(f"the {direction} source side of {inst.rule} has no nodes to match")
    site, feeds, consumers = _match(host, src, site)
    matched = set(site.values())
    box_id = max(host.nodes) + 1
    nodes = {n: v for n, v in host.nodes.items() if n not in matched}
    nodes[box_id] = Box(host.calculus, src.inputs, src.outputs)

    def fix(e):
        return (box_id, e[1]) if e[0] == "box" else e

    wires = {}
    for tgt, s in host.wires.items():
        if tgt[0] != "out" and tgt[0] in matched:
            continue
        if s[0] != "in" and s[0] in matched:
            continue
        wires[tgt] = s
    for i, f in enumerate(feeds):
        wires[(box_id, i)] = fix(f)
    for j, c in enumerate(consumers):
        wires[fix(c)] = (box_id, j)
    boxed = Diagram(host.calculus, nodes, wires, host.inputs, host.outputs, check=False)
    out, prov = substitute(boxed, {box_id: dst}, preserve_ids=True)
    validate(out)
    return out, prov[box_id]


def apply(host: Diagram, site: Mapping[int, int], inst: RuleInstance, direction: str = "lr") -> Diagram:
    """Replace the matched source side of ``inst`` by its other side."""
    return apply_with_ids(host, site, inst, direction)[0]


def find_sites(host: Diagram, pattern: Diagram, limit: int | None = None) -> list[dict[int, int]]:
    """Every site where ``pattern`` matches ``host``; exhaustive, for small hosts only."""
    if len(host.nodes) > 12:
        raise ValueError("find_sites is exhaustive and limited to hosts of at most 12 nodes")
    pnodes = sorted(pattern.nodes)
    options = [[h for h in sorted(host.nodes) if nodes_match(pattern.nodes[p], host.nodes[h])] for p in pnodes]
    found = []
    for combo in itertools.product(*options):
        if len(set(combo)) != len(combo):
            continue
        site = dict(zip(pnodes, combo))
        try:
            _match(host, pattern, site)
        except SiteMismatchError:
            continue
        found.append(site)
        if limit is not None and len(found) >= limit:
            break
    return found


# -- scripts -------------------------------------------------------------------


@dataclass
class Step:
    rule: str
    params: dict
    site: dict[int, int]
    direction: str = "lr"

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "params": jsonable(self.params),
            "site": {str(k): v for k, v in sorted(self.site.items())},
            "direction": self.direction,
        }


def parse_script(obj) -> list[Step]:
    if not isinstance(obj, list):
        raise SchemaError("a rewrite script is a JSON array of steps")
    steps = []
    for k, entry in enumerate(obj):
        where = f"steps[{k}]"
        if not isinstance(entry, dict):
            raise SchemaError(f"{where} must be an object")
        for name in ("rule", "site"):
            if name not in entry:
                raise SchemaError(f"missing field {where}.{name}")
        rule = entry["rule"]
        try:
            get_rule(rule)
        except KeyError as exc:
            raise SchemaError(f"{where}.rule: {exc.args[0]}") from None
        params = decode_params(rule, entry.get("params", {}))
        site_raw = entry["site"]
        if not isinstance(site_raw, dict):
            raise SchemaError(f"{where}.site must map rule node ids to host node ids")
        try:
            site = {int(a): int(b) for a, b in site_raw.items()}
        except (TypeError, ValueError):
            raise SchemaError(f"{where}.site: node ids must be integers") from None
        direction = entry.get("direction", "lr")
        try:
            direction = normalize_direction(direction)
        except ValueError as exc:
            raise SchemaError(f"{where}.direction: {exc}") from None
        steps.append(Step(rule, params, site, direction))
    return steps


def load_script(text: str) -> list[Step]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_script(obj)


def replay(d: Diagram, script: Sequence[Step], tol: float = DEFAULT_TOL) -> tuple[Diagram, list[dict]]:
    """Apply the steps in order, checking semantic equality after each one."""
    log: list[dict] = []
    current = d
    before = interpret(current) if script else None
    for k, step in enumerate(script, start=1):
        entry = {"step": k, "rule": step.rule, "direction": step.direction}
        try:
            inst = instantiate(step.rule, step.params)
            nxt, new_ids = apply_with_ids(current, step.site, inst, step.direction)
        except (DiagramError, ValueError, KeyError) as exc:
            entry.update(ok=False, error=str(exc))
            log.append(entry)
            raise ReplayError(f"step {k} ({step.rule}): {exc}", k, log, semantic=False) from None
        after = interpret(nxt)
        verdict = tensor_equal(before.data, after.data, tol) if before.shape == after.shape else None
        dev = verdict.max_abs_deviation if verdict else float("inf")
        entry.update(ok=bool(verdict), deviation=dev, new_nodes=new_ids)
        log.append(entry)
        if not verdict:
            raise ReplayError(f"step {k} ({step.rule}) changed the interpretation by {dev:.3g}", k, log, semantic=True)
        current, before = nxt, after
    return current, log
