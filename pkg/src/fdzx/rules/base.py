"""Rule descriptors, instances and numerical soundness checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..diagram import Diagram
from ..report import CheckRecord, VerificationReport, jsonable
from ..semantics import DEFAULT_TOL, interpret, tensor_equal
from ..serialize import SchemaError, decode_complex


class SideConditionError(ValueError):
    """Parameters violate a rule's side condition."""

    def __init__(self, rule: str, condition: str, detail: str = ""):
        self.rule = rule
        self.condition = condition
        msg = f"{rule}: side condition violated: {condition}"
        super().__init__(f"{msg} ({detail})" if detail else msg)


# parameter kinds understood by the script and CLI decoders
PARAM_KINDS = ("dim", "dims", "label", "labels", "int", "complex", "cvec")


@dataclass(frozen=True)
class Param:
    name: str
    kind: str
    doc: str = ""
    optional: bool = False


@dataclass(frozen=True)
class Rule:
    name: str
    calculus: str
    params: tuple[Param, ...]
    build: Callable[[dict], tuple[Diagram, Diagram, dict]]
    sample: Callable[[np.random.Generator, Sequence[int]], dict]
    side_conditions: tuple[str, ...] = ()
    derived: bool = False
    doc: str = ""
    normalize: Callable[[dict], dict] | None = None

    def descriptor(self) -> dict:
        return {
            "name": self.name,
            "calculus": self.calculus,
            "derived": self.derived,
            "params": [
                {"name": p.name, "kind": p.kind, "doc": p.doc, "optional": p.optional}
                for p in self.params
            ],
            "side_conditions": list(self.side_conditions),
            "doc": self.doc,
        }


@dataclass(frozen=True)
class RuleInstance:
    rule: str
    calculus: str
    params: dict
    lhs: Diagram
    rhs: Diagram
    derived: dict = field(default_factory=dict)

    def side(self, direction: str) -> tuple[Diagram, Diagram]:
        """(source, target) for a rewrite direction."""
        return (self.lhs, self.rhs) if normalize_direction(direction) == "lr" else (self.rhs, self.lhs)


_REGISTRY: dict[str, Rule] = {}


def register(rule: Rule) -> Rule:
    if rule.name in _REGISTRY:
        raise ValueError(f"rule {rule.name} registered twice")
    _REGISTRY[rule.name] = rule
    return rule


def get_rule(name: str) -> Rule:
    _load()
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown rule {name!r}") from None


def catalog(calculus: str) -> list[Rule]:
    _load()
    return [r for r in _REGISTRY.values() if r.calculus == calculus]


def _load() -> None:
    from . import zw, zx  # noqa: F401  (registers the catalogs)


def instantiate(name: str, params: dict) -> RuleInstance:
    rule = get_rule(name)
    params = dict(params)
    if rule.normalize is not None:
        params = rule.normalize(params)
    missing = [p.name for p in rule.params if not p.optional and p.name not in params]
    if missing:
        raise ValueError(f"{name}: missing parameter(s) {', '.join(missing)}")
    lhs, rhs, derived = rule.build(params)
    if (lhs.inputs, lhs.outputs) != (rhs.inputs, rhs.outputs):
        raise AssertionError(
            f"{name}: sides disagree on signature {lhs.signature} vs {rhs.signature}"
        )
    return RuleInstance(name, rule.calculus, params, lhs, rhs, derived)


def normalize_direction(direction: str) -> str:
    d = direction.strip().lower().replace(" ", "")
    if d in ("lr", "l->r", "l2r", "forward", "ltr", "l→r"):
        return "lr"
    if d in ("rl", "r->l", "r2l", "backward", "rtl", "r→l"):
        return "rl"
    raise ValueError(f"unknown rewrite direction {direction!r}")


# -- parameter decoding --------------------------------------------------------


def decode_params(name: str, raw: dict) -> dict:
    """Decode JSON params (complex numbers as [re, im]) by the rule's schema."""
    rule = get_rule(name)
    kinds = {p.name: p.kind for p in rule.params}
    out = {}
    for key, value in raw.items():
        kind = kinds.get(key)
        where = f"{name}.params.{key}"
        if kind in ("complex",):
            out[key] = decode_complex(value, where)
        elif kind == "cvec":
            if not isinstance(value, list):
                raise SchemaError(f"{where}: expected a list of complex numbers")
            out[key] = tuple(decode_complex(v, where) for v in value)
        elif kind in ("dims", "labels"):
            if not isinstance(value, list) or not all(_is_int(v) for v in value):
                raise SchemaError(f"{where}: expected a list of integers")
            out[key] = tuple(value)
        elif kind in ("dim", "label", "int"):
            if not _is_int(value):
                raise SchemaError(f"{where}: expected an integer")
            out[key] = value
        else:
            # shorthand keys accepted by a rule's normaliser
            out[key] = value
    return out


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


# -- random draws --------------------------------------------------------------


def random_complex(rng: np.random.Generator) -> complex:
    """Modulus uniform in [0.5, 2], phase uniform."""
    mod = rng.uniform(0.5, 2.0)
    ang = rng.uniform(0.0, 2 * math.pi)
    return complex(mod * math.cos(ang), mod * math.sin(ang))


def random_phase(rng: np.random.Generator, a: int) -> tuple[complex, ...]:
    return (1 + 0j,) + tuple(random_complex(rng) for _ in range(a - 1))


def choice(rng: np.random.Generator, values: Sequence):
    return values[int(rng.integers(len(values)))]


# -- soundness -----------------------------------------------------------------


def check_instance(inst: RuleInstance, tol: float = DEFAULT_TOL, key: str | None = None) -> CheckRecord:
    verdict = tensor_equal(interpret(inst.lhs), interpret(inst.rhs), tol)
    detail = {"rule": inst.rule, "params": inst.params} if not verdict.equal else {"rule": inst.rule}
    return CheckRecord(key or inst.rule, verdict.equal, verdict.max_abs_deviation, jsonable(detail))


def soundness_check(inst: RuleInstance, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Interpret both sides and compare them exactly at tolerance ``tol``."""
    report = VerificationReport(f"soundness:{inst.rule}", config={"tol": tol})
    report.records.append(check_instance(inst, tol))
    return report
