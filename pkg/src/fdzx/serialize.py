"""JSON diagram format.

::

    {"calculus": "zx",
     "nodes": [{"id": 0, "kind": "z_spider", "params": {...}}],
     "wires": [{"from": ["in", 0], "to": [0, 0], "dim": 3}, ...],
     "inputs": [3], "outputs": [3]}

Complex numbers are written as ``[re, im]``.
"""

from __future__ import annotations

import json
from dataclasses import MISSING
from typing import Any

from .diagram import CALCULI, NODE_KINDS, Diagram, DiagramError, canonical, validate


class SchemaError(DiagramError):
    """Well-formed JSON that does not describe a diagram."""


class ParseError(DiagramError):
    """Text that is not JSON at all."""


# params holding complex values (scalars or lists)
_COMPLEX_PARAMS = {"phase", "value", "r"}


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(v: Any, field: str) -> complex:
    if isinstance(v, bool):
        raise SchemaError(f"{field}: expected a number or [re, im], got {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if (
        isinstance(v, list)
        and len(v) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        return complex(v[0], v[1])
    raise SchemaError(f"{field}: expected a number or [re, im], got {v!r}")


def _encode_param(name: str, value):
    if name in _COMPLEX_PARAMS:
        if isinstance(value, (list, tuple)):
            return [encode_complex(x) for x in value]
        return encode_complex(value)
    return value


def _endpoint(e) -> list:
    return [e[0], e[1]]


def to_dict(d: Diagram) -> dict:
    nodes = [
        {
            "id": nid,
            "kind": d.nodes[nid].kind,
            "params": {k: _encode_param(k, v) for k, v in d.nodes[nid].params().items()},
        }
        for nid in sorted(d.nodes)
    ]

    def key(item):
        tgt = item[0]
        return (tgt[0] == "out", tgt[0] if tgt[0] != "out" else 0, tgt[1])

    wires = [
        {"from": _endpoint(src), "to": _endpoint(tgt), "dim": d.source_dim(src)}
        for tgt, src in sorted(d.wires.items(), key=key)
    ]
    return {
        "calculus": d.calculus,
        "nodes": nodes,
        "wires": wires,
        "inputs": list(d.inputs),
        "outputs": list(d.outputs),
    }


def serialize(d: Diagram, indent: int | None = 2) -> str:
    validate(d)
    return json.dumps(to_dict(d), indent=indent)


def canonical_json(d: Diagram) -> str:
    """Serialization of the canonically renumbered diagram."""
    return json.dumps(to_dict(canonical(d)), sort_keys=True)


def _need(obj: dict, field: str, kind, where: str = ""):
    if field not in obj:
        raise SchemaError(f"missing field {where}{field!r}")
    v = obj[field]
    if not isinstance(v, kind) or (isinstance(v, bool) and kind is int):
        raise SchemaError(f"field {where}{field!r} has the wrong type ({type(v).__name__})")
    return v


def _int(v, field: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{field}: expected an integer, got {v!r}")
    return v


def _decode_endpoint(v, field: str, boundary: str):
    if not isinstance(v, list) or len(v) != 2:
        raise SchemaError(f"{field}: expected a two-element endpoint, got {v!r}")
    head, port = v
    port = _int(port, field)
    if head == boundary:
        return (boundary, port)
    if isinstance(head, str):
        raise SchemaError(f"{field}: unknown boundary tag {head!r}")
    return (_int(head, field), port)


def _decode_params(kind: str, params: dict, where: str) -> dict:
    cls = NODE_KINDS[kind]
    fields = [f for f in cls.__dataclass_fields__ if f not in ("calculus", "kind")]
    unknown = set(params) - set(fields)
    if unknown:
        raise SchemaError(f"unknown field {where}params.{sorted(unknown)[0]}")
    out = {}
    for name, value in params.items():
        field = f"{where}params.{name}"
        if name in _COMPLEX_PARAMS:
            if name == "phase":
                if not isinstance(value, list):
                    raise SchemaError(f"{field}: expected a list of complex numbers")
                out[name] = tuple(decode_complex(x, field) for x in value)
            else:
                out[name] = decode_complex(value, field)
        elif name in ("in_dims", "out_dims", "smalls"):
            if not isinstance(value, list):
                raise SchemaError(f"{field}: expected a list of integers")
            out[name] = tuple(_int(x, field) for x in value)
        elif name == "inverted":
            if not isinstance(value, bool):
                raise SchemaError(f"{field}: expected a boolean")
            out[name] = value
        else:
            out[name] = _int(value, field)
    required = [f for f in fields if cls.__dataclass_fields__[f].default is MISSING]
    for f in required:
        if f not in out:
            raise SchemaError(f"missing field {where}params.{f}")
    return out


def from_dict(obj: Any) -> Diagram:
    if not isinstance(obj, dict):
        raise SchemaError("top level must be an object")
    calculus = _need(obj, "calculus", str)
    if calculus not in CALCULI:
        raise SchemaError(f"field 'calculus' must be one of {CALCULI}, got {calculus!r}")
    nodes_raw = _need(obj, "nodes", list)
    wires_raw = _need(obj, "wires", list)
    inputs = [_int(x, "inputs") for x in _need(obj, "inputs", list)]
    outputs = [_int(x, "outputs") for x in _need(obj, "outputs", list)]

    nodes = {}
    for k, entry in enumerate(nodes_raw):
        where = f"nodes[{k}]."
        if not isinstance(entry, dict):
            raise SchemaError(f"nodes[{k}] must be an object")
        nid = _int(_need(entry, "id", int, where), f"{where}id")
        kind = _need(entry, "kind", str, where)
        if kind not in NODE_KINDS:
            raise SchemaError(f"field {where}kind: unknown node kind {kind!r}")
        params = _need(entry, "params", dict, where)
        if nid in nodes:
            raise SchemaError(f"field {where}id: duplicate node id {nid}")
        try:
            nodes[nid] = NODE_KINDS[kind](**_decode_params(kind, params, where))
        except DiagramError as exc:
            raise type(exc)(f"node {nid}: {exc}") from None

    wires = {}
    for k, entry in enumerate(wires_raw):
        where = f"wires[{k}]."
        if not isinstance(entry, dict):
            raise SchemaError(f"wires[{k}] must be an object")
        src = _decode_endpoint(_need(entry, "from", list, where), f"{where}from", "in")
        tgt = _decode_endpoint(_need(entry, "to", list, where), f"{where}to", "out")
        if tgt in wires:
            raise SchemaError(f"field {where}to: endpoint {list(tgt)} is wired twice")
        wires[tgt] = src
        if "dim" in entry:
            dim = _int(entry["dim"], f"{where}dim")
            _check_wire_dim(nodes, inputs, outputs, src, tgt, dim, where)
    return Diagram(calculus, nodes, wires, inputs, outputs)


def _check_wire_dim(nodes, inputs, outputs, src, tgt, dim, where):
    try:
        if src[0] == "in":
            sd = inputs[src[1]]
        else:
            sd = nodes[src[0]].outputs[src[1]]
    except (IndexError, KeyError):
        return  # reported by validation with better context
    if sd != dim:
        raise SchemaError(f"field {where}dim: {dim} disagrees with the source endpoint ({sd})")


def deserialize(text: str) -> Diagram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(obj)


def load(path) -> Diagram:
    with open(path, encoding="utf-8") as fh:
        return deserialize(fh.read())


def dump(d: Diagram, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(d))
        fh.write("\n")
