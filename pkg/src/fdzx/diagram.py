"""Generator nodes and open-graph diagrams for the ZX and ZW calculi.

A :class:`Diagram` is a set of generator nodes plus directed wires.  Every wire
runs from a *source* (a diagram input slot ``("in", i)`` or a node output port
``(node_id, p)``) to a *target* (a node input port ``(node_id, q)`` or a diagram
output slot ``("out", j)``).  Diagrams read top to bottom: inputs on top.

Wire sizes are stored the way each calculus writes them.  A ZX wire labelled
``d`` carries ``C^d``; a ZW wire labelled ``a`` carries ``C^(a+1)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import ClassVar, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import _kernels

ZX = "zx"
ZW = "zw"
CALCULI = (ZX, ZW)

Source = tuple  # ("in", i) or (node_id, out_port)
Target = tuple  # ("out", j) or (node_id, in_port)


class DiagramError(ValueError):
    """Base class for malformed diagrams and illegal operations on them."""


class ValidationError(DiagramError):
    pass


class CompositionError(DiagramError):
    pass


def carried_dim(calculus: str, label: int) -> int:
    """Hilbert-space dimension carried by a wire label."""
    return label if calculus == ZX else label + 1


def _check_phase(phase: Sequence[complex], where: str) -> tuple[complex, ...]:
    phase = tuple(complex(x) for x in phase)
    if not phase:
        raise ValidationError(f"{where}: empty phase vector")
    if phase[0] != 1:
        raise ValidationError(f"{where}: phase vector must start with 1, got {phase[0]}")
    return phase


# -- nodes ---------------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    """A generator.  Subclasses fix the calculus, signature and tensor."""

    calculus: ClassVar[str]
    kind: ClassVar[str]

    @property
    def inputs(self) -> tuple[int, ...]:
        raise NotImplementedError

    @property
    def outputs(self) -> tuple[int, ...]:
        raise NotImplementedError

    def tensor(self) -> np.ndarray:
        """Dense tensor, axes ordered outputs then inputs."""
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def _check_labels(self) -> None:
        low = 2 if self.calculus == ZX else 1
        for d in self.inputs + self.outputs:
            if int(d) != d or d < low:
                unit = "dimension" if self.calculus == ZX else "label"
                raise ValidationError(f"{self.kind}: {unit} {d} is below {low}")

    def __post_init__(self):
        self._check_labels()


def _shape(node: Node) -> tuple[int, ...]:
    return tuple(carried_dim(node.calculus, d) for d in node.outputs + node.inputs)


@dataclass(frozen=True)
class ZSpider(Node):
    """Mixed-dimensional Z-spider; ``phase`` has length min(leg dims)."""

    in_dims: tuple[int, ...]
    out_dims: tuple[int, ...]
    phase: tuple[complex, ...]
    calculus: ClassVar[str] = ZX
    kind: ClassVar[str] = "z_spider"

    def __post_init__(self):
        object.__setattr__(self, "in_dims", tuple(int(d) for d in self.in_dims))
        object.__setattr__(self, "out_dims", tuple(int(d) for d in self.out_dims))
        object.__setattr__(self, "phase", _check_phase(self.phase, "z_spider"))
        super().__post_init__()
        legs = self.in_dims + self.out_dims
        if legs and len(self.phase) != min(legs):
            raise ValidationError(
                f"z_spider: phase vector has length {len(self.phase)}, "
                f"expected the minimal leg dimension {min(legs)}"
            )
        if not legs and len(self.phase) < 2:
            raise ValidationError("z_spider: a legless spider needs a phase of length >= 2")

    @property
    def dim(self) -> int:
        return len(self.phase)

    @property
    def inputs(self):
        return self.in_dims

    @property
    def outputs(self):
        return self.out_dims

    def tensor(self):
        return _kernels.diagonal_tensor(_shape(self), self.phase)

    def params(self):
        return {"in_dims": list(self.in_dims), "out_dims": list(self.out_dims), "phase": list(self.phase)}


@dataclass(frozen=True)
class XSpider(Node):
    """Qudit X-spider: one where inputs and outputs sum to the same value mod ``dim``."""

    dim: int
    n_in: int
    n_out: int
    calculus: ClassVar[str] = ZX
    kind: ClassVar[str] = "x_spider"

    def __post_init__(self):
        if self.dim < 2:
            raise ValidationError(f"x_spider: dimension {self.dim} is below 2")
        if self.n_in < 0 or self.n_out < 0:
            raise ValidationError("x_spider: negative arity")

    @property
    def inputs(self):
        return (self.dim,) * self.n_in

    @property
    def outputs(self):
        return (self.dim,) * self.n_out

    def tensor(self):
        return _kernels.x_spider_tensor(self.dim, self.n_out, self.n_in).astype(np.complex128)

    def params(self):
        return {"dim": self.dim, "n_in": self.n_in, "n_out": self.n_out}


@dataclass(frozen=True)
class Embedding(Node):
    """sum_{k < min(a, b)} |k><k| from dimension ``dim_in`` to ``dim_out``."""

    dim_in: int
    dim_out: int
    calculus: ClassVar[str] = ZX
    kind: ClassVar[str] = "embedding"

    @property
    def inputs(self):
        return (self.dim_in,)

    @property
    def outputs(self):
        return (self.dim_out,)

    def tensor(self):
        return np.eye(self.dim_out, self.dim_in, dtype=np.complex128)

    def params(self):
        return {"dim_in": self.dim_in, "dim_out": self.dim_out}


@dataclass(frozen=True)
class BasisKet(Node):
    index: int
    dim: int
    calculus: ClassVar[str] = ZX
    kind: ClassVar[str] = "basis_ket"

    def __post_init__(self):
        super().__post_init__()
        if not 0 <= self.index < self.dim:
            raise ValidationError(f"basis_ket: index {self.index} outside 0..{self.dim - 1}")

    @property
    def inputs(self):
        return ()

    @property
    def outputs(self):
        return (self.dim,)

    def tensor(self):
        t = np.zeros(self.dim, dtype=np.complex128)
        t[self.index] = 1
        return t

    def params(self):
        return {"index": self.index, "dim": self.dim}


@dataclass(frozen=True)
class Identity(Node):
    dim: int
    calculus: ClassVar[str] = ZX
    kind: ClassVar[str] = "identity"

    @property
    def inputs(self):
        return (self.dim,)

    @property
    def outputs(self):
        return (self.dim,)

    def tensor(self):
        return np.eye(carried_dim(self.calculus, self.dim), dtype=np.complex128)

    def params(self):
        return {"dim": self.dim}


@dataclass(frozen=True)
class Swap(Node):
    """Inputs (a, b), outputs (b, a)."""

    a: int
    b: int
    calculus: ClassVar[str] = ZX
    kind: ClassVar[str] = "swap"

    @property
    def inputs(self):
        return (self.a, self.b)

    @property
    def outputs(self):
        return (self.b, self.a)

    def tensor(self):
        da, db = carried_dim(self.calculus, self.a), carried_dim(self.calculus, self.b)
        # T[l, k, k', l'] = delta(k, k') delta(l, l')
        return np.einsum("ik,jl->jikl", np.eye(da), np.eye(db)).astype(np.complex128)

    def params(self):
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class Cap(Node):
    """sum_k |k, k>, signature () -> (dim, dim)."""

    dim: int
    calculus: ClassVar[str] = ZX
    kind: ClassVar[str] = "cap"

    @property
    def inputs(self):
        return ()

    @property
    def outputs(self):
        return (self.dim, self.dim)

    def tensor(self):
        return np.eye(carried_dim(self.calculus, self.dim), dtype=np.complex128)

    def params(self):
        return {"dim": self.dim}


@dataclass(frozen=True)
class Cup(Node):
    """sum_k <k, k|, signature (dim, dim) -> ()."""

    dim: int
    calculus: ClassVar[str] = ZX
    kind: ClassVar[str] = "cup"

    @property
    def inputs(self):
        return (self.dim, self.dim)

    @property
    def outputs(self):
        return ()

    def tensor(self):
        return np.eye(carried_dim(self.calculus, self.dim), dtype=np.complex128)

    def params(self):
        return {"dim": self.dim}


@dataclass(frozen=True)
class GlobalScalar(Node):
    value: complex
    calculus: ClassVar[str] = ZX
    kind: ClassVar[str] = "scalar"

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))

    @property
    def inputs(self):
        return ()

    @property
    def outputs(self):
        return ()

    def tensor(self):
        return np.asarray(self.value, dtype=np.complex128)

    def params(self):
        return {"value": self.value}


# ZW generators


@dataclass(frozen=True)
class ZWSpider(Node):
    """sum_{k<=a} r^k sqrt(k!)^(n+m-2) |k..k><k..k| on label ``label``."""

    r: complex
    label: int
    n_in: int
    n_out: int
    calculus: ClassVar[str] = ZW
    kind: ClassVar[str] = "zw_spider"

    def __post_init__(self):
        object.__setattr__(self, "r", complex(self.r))
        if self.label < 1:
            raise ValidationError(f"zw_spider: label {self.label} is below 1")

    @property
    def inputs(self):
        return (self.label,) * self.n_in

    @property
    def outputs(self):
        return (self.label,) * self.n_out

    def diagonal(self) -> np.ndarray:
        k = np.arange(self.label + 1)
        fact = np.array([math.factorial(int(i)) for i in k], dtype=np.float64)
        return np.power(self.r, k) * np.sqrt(fact) ** (self.n_in + self.n_out - 2)

    def tensor(self):
        return _kernels.diagonal_tensor(_shape(self), self.diagonal())

    def params(self):
        return {"r": self.r, "label": self.label, "n_in": self.n_in, "n_out": self.n_out}


@dataclass(frozen=True)
class WNode(Node):
    """W-node with big leg ``big`` and small legs ``smalls``.

    By default the big leg is the single input; ``inverted`` flips the node so
    the small legs are inputs and the big leg the single output.
    """

    big: int
    smalls: tuple[int, ...]
    inverted: bool = False
    calculus: ClassVar[str] = ZW
    kind: ClassVar[str] = "w_node"

    def __post_init__(self):
        object.__setattr__(self, "smalls", tuple(int(b) for b in self.smalls))
        object.__setattr__(self, "inverted", bool(self.inverted))
        super().__post_init__()
        if self.smalls and self.big < max(self.smalls):
            raise ValidationError(
                f"w_node: big leg {self.big} is smaller than small leg {max(self.smalls)}"
            )

    @property
    def inputs(self):
        return self.smalls if self.inverted else (self.big,)

    @property
    def outputs(self):
        return (self.big,) if self.inverted else self.smalls

    def tensor(self):
        t = _kernels.w_node_tensor(self.big, self.smalls).astype(np.complex128)
        if self.inverted:
            t = np.moveaxis(t, -1, 0)
        return t

    def params(self):
        return {"big": self.big, "smalls": list(self.smalls), "inverted": self.inverted}


@dataclass(frozen=True)
class ZWKet(Node):
    """sqrt(k!) |k> on label ``label`` when 0 < k <= label, the zero vector otherwise."""

    index: int
    label: int
    calculus: ClassVar[str] = ZW
    kind: ClassVar[str] = "zw_ket"

    def __post_init__(self):
        super().__post_init__()
        if self.index < 0:
            raise ValidationError(f"zw_ket: negative index {self.index}")

    @property
    def inputs(self):
        return ()

    @property
    def outputs(self):
        return (self.label,)

    def tensor(self):
        t = np.zeros(self.label + 1, dtype=np.complex128)
        if 0 < self.index <= self.label:
            t[self.index] = math.sqrt(math.factorial(self.index))
        return t

    def params(self):
        return {"index": self.index, "label": self.label}


@dataclass(frozen=True)
class ZWScalar(Node):
    value: complex
    calculus: ClassVar[str] = ZW
    kind: ClassVar[str] = "zw_scalar"

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))

    @property
    def inputs(self):
        return ()

    @property
    def outputs(self):
        return ()

    def tensor(self):
        return np.asarray(self.value, dtype=np.complex128)

    def params(self):
        return {"value": self.value}


@dataclass(frozen=True)
class ZWIdentity(Identity):
    calculus: ClassVar[str] = ZW
    kind: ClassVar[str] = "zw_identity"


@dataclass(frozen=True)
class ZWSwap(Swap):
    calculus: ClassVar[str] = ZW
    kind: ClassVar[str] = "zw_swap"


@dataclass(frozen=True)
class ZWCap(Cap):
    calculus: ClassVar[str] = ZW
    kind: ClassVar[str] = "zw_cap"


@dataclass(frozen=True)
class ZWCup(Cup):
    calculus: ClassVar[str] = ZW
    kind: ClassVar[str] = "zw_cup"


NODE_KINDS: dict[str, type[Node]] = {
    cls.kind: cls
    for cls in (
        ZSpider, XSpider, Embedding, BasisKet, Identity, Swap, Cap, Cup, GlobalScalar,
        ZWSpider, WNode, ZWKet, ZWScalar, ZWIdentity, ZWSwap, ZWCap, ZWCup,
    )
}

_STRUCTURAL = {
    ZX: {"identity": Identity, "swap": Swap, "cap": Cap, "cup": Cup, "scalar": GlobalScalar},
    ZW: {"identity": ZWIdentity, "swap": ZWSwap, "cap": ZWCap, "cup": ZWCup, "scalar": ZWScalar},
}


def structural(calculus: str, name: str) -> type[Node]:
    """The identity/swap/cap/cup/scalar node class of a calculus."""
    return _STRUCTURAL[calculus][name]


# -- diagrams ------------------------------------------------------------------


class BoundarySignature(NamedTuple):
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]


class Diagram:
    """Immutable open graph of generator nodes.

    ``wires`` maps every target endpoint to the source endpoint feeding it.
    ``inputs``/``outputs`` hold the label of each boundary slot, in order.
    """

    __slots__ = ("calculus", "nodes", "wires", "inputs", "outputs")

    def __init__(
        self,
        calculus: str,
        nodes: Mapping[int, Node],
        wires: Mapping[Target, Source],
        inputs: Sequence[int],
        outputs: Sequence[int],
        check: bool = True,
    ):
        if calculus not in CALCULI:
            raise ValidationError(f"unknown calculus {calculus!r}")
        self.calculus = calculus
        self.nodes = dict(nodes)
        self.wires = dict(wires)
        self.inputs = tuple(int(d) for d in inputs)
        self.outputs = tuple(int(d) for d in outputs)
        if check:
            validate(self)

    # construction helpers

    @classmethod
    def empty(cls, calculus: str) -> Diagram:
        return cls(calculus, {}, {}, (), ())

    @classmethod
    def wire(cls, calculus: str, dims: Sequence[int]) -> Diagram:
        """Bare wires (no nodes) of the given labels."""
        wires = {("out", i): ("in", i) for i in range(len(dims))}
        return cls(calculus, {}, wires, dims, dims)

    @classmethod
    def from_node(cls, node: Node) -> Diagram:
        wires = {(0, q): ("in", q) for q in range(len(node.inputs))}
        wires.update({("out", p): (0, p) for p in range(len(node.outputs))})
        return cls(node.calculus, {0: node}, wires, node.inputs, node.outputs)

    # properties

    @property
    def signature(self) -> BoundarySignature:
        return BoundarySignature(self.inputs, self.outputs)

    def source_dim(self, src: Source) -> int:
        if src[0] == "in":
            return self.inputs[src[1]]
        return self.nodes[src[0]].outputs[src[1]]

    def target_dim(self, tgt: Target) -> int:
        if tgt[0] == "out":
            return self.outputs[tgt[1]]
        return self.nodes[tgt[0]].inputs[tgt[1]]

    def consumers(self) -> dict[Source, Target]:
        return {src: tgt for tgt, src in self.wires.items()}

    def next_id(self) -> int:
        return max(self.nodes, default=-1) + 1

    def relabel(self, offset: int) -> Diagram:
        """Shift every node id by ``offset``."""
        shift = lambda e: e if isinstance(e[0], str) else (e[0] + offset, e[1])  # noqa: E731
        return Diagram(
            self.calculus,
            {i + offset: n for i, n in self.nodes.items()},
            {shift(t): shift(s) for t, s in self.wires.items()},
            self.inputs,
            self.outputs,
            check=False,
        )

    # composition

    def then(self, other: Diagram) -> Diagram:
        return compose_seq(self, other)

    def tensor(self, other: Diagram) -> Diagram:
        return compose_par(self, other)

    __rshift__ = then
    __matmul__ = tensor

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        kinds = ", ".join(f"{i}:{n.kind}" for i, n in sorted(self.nodes.items()))
        return f"Diagram({self.calculus}, {self.inputs} -> {self.outputs}, [{kinds}])"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return (
            self.calculus == other.calculus
            and self.nodes == other.nodes
            and self.wires == other.wires
            and self.inputs == other.inputs
            and self.outputs == other.outputs
        )

    __hash__ = None


class Builder:
    """Mutable helper for wiring a diagram by hand.

    >>> b = Builder(ZX, inputs=[3])
    >>> s = b.add(ZSpider((3,), (3,), (1, 1, 1)))
    >>> b.connect(b.input(0), (s, 0))
    >>> b.output((s, 0))
    >>> b.build().signature
    BoundarySignature(inputs=(3,), outputs=(3,))
    """

    def __init__(self, calculus: str, inputs: Sequence[int] = ()):
        self.calculus = calculus
        self.inputs = list(inputs)
        self.outputs: list[int] = []
        self.nodes: dict[int, Node] = {}
        self.wires: dict[Target, Source] = {}

    def add(self, node: Node) -> int:
        nid = len(self.nodes)
        while nid in self.nodes:
            nid += 1
        self.nodes[nid] = node
        return nid

    def input(self, i: int) -> Source:
        return ("in", i)

    def connect(self, src: Source, tgt: Target) -> None:
        if tgt in self.wires:
            raise ValidationError(f"target {tgt} is already wired")
        self.wires[tgt] = src

    def output(self, src: Source, dim: int | None = None) -> None:
        if dim is None:
            dim = self.inputs[src[1]] if src[0] == "in" else self.nodes[src[0]].outputs[src[1]]
        self.wires[("out", len(self.outputs))] = src
        self.outputs.append(dim)

    def insert(self, d: Diagram, feeds: Sequence[Source]) -> list[Source]:
        """Splice ``d`` in, feeding its inputs from ``feeds``; returns its output sources."""
        if len(feeds) != len(d.inputs):
            raise CompositionError(f"expected {len(d.inputs)} feeds, got {len(feeds)}")
        idmap = {old: self.add(node) for old, node in sorted(d.nodes.items())}

        def src_of(s):
            return feeds[s[1]] if s[0] == "in" else (idmap[s[0]], s[1])

        outs = [None] * len(d.outputs)
        for tgt, src in d.wires.items():
            if tgt[0] == "out":
                outs[tgt[1]] = src_of(src)
            else:
                self.connect(src_of(src), (idmap[tgt[0]], tgt[1]))
        return outs

    def build(self, check: bool = True) -> Diagram:
        return Diagram(self.calculus, self.nodes, self.wires, self.inputs, self.outputs, check=check)


def _same_calculus(a: Diagram, b: Diagram) -> None:
    if a.calculus != b.calculus:
        raise CompositionError(f"cannot compose a {a.calculus} diagram with a {b.calculus} diagram")


def compose_seq(top: Diagram, bottom: Diagram) -> Diagram:
    """Plug ``top``'s outputs into ``bottom``'s inputs."""
    _same_calculus(top, bottom)
    if len(top.outputs) != len(bottom.inputs):
        raise CompositionError(
            f"top has {len(top.outputs)} outputs but bottom has {len(bottom.inputs)} inputs"
        )
    for slot, (x, y) in enumerate(zip(top.outputs, bottom.inputs)):
        if x != y:
            raise CompositionError(f"slot {slot}: top output {x} does not match bottom input {y}")
    low = top.next_id()
    bottom = bottom.relabel(low)
    wires = {t: s for t, s in top.wires.items() if t[0] != "out"}
    for tgt, src in bottom.wires.items():
        wires[tgt] = top.wires[("out", src[1])] if src[0] == "in" else src
    nodes = {**top.nodes, **bottom.nodes}
    return Diagram(top.calculus, nodes, wires, top.inputs, bottom.outputs, check=False)


def compose_par(left: Diagram, right: Diagram) -> Diagram:
    """Place ``right`` to the right of ``left``."""
    _same_calculus(left, right)
    ni, no = len(left.inputs), len(left.outputs)
    right = right.relabel(left.next_id())

    def shift(e):
        if e[0] == "in":
            return ("in", e[1] + ni)
        if e[0] == "out":
            return ("out", e[1] + no)
        return e

    wires = dict(left.wires)
    wires.update({shift(t): shift(s) for t, s in right.wires.items()})
    return Diagram(
        left.calculus,
        {**left.nodes, **right.nodes},
        wires,
        left.inputs + right.inputs,
        left.outputs + right.outputs,
        check=False,
    )


def permutation(calculus: str, dims: Sequence[int], perm: Sequence[int]) -> Diagram:
    """Bare-wire diagram whose output ``k`` is input ``perm[k]``."""
    if sorted(perm) != list(range(len(dims))):
        raise CompositionError(f"{list(perm)} is not a permutation of {len(dims)} wires")
    wires = {("out", k): ("in", perm[k]) for k in range(len(perm))}
    return Diagram(calculus, {}, wires, dims, [dims[p] for p in perm])


def tensor_all(calculus: str, parts: Iterable[Diagram]) -> Diagram:
    out = Diagram.empty(calculus)
    for p in parts:
        out = compose_par(out, p)
    return out


def transpose(d: Diagram) -> Diagram:
    """Exchange inputs and outputs by bending every boundary wire with caps and cups."""
    cap_cls, cup_cls = structural(d.calculus, "cap"), structural(d.calculus, "cup")
    b = Builder(d.calculus, inputs=d.outputs)
    # a cap per old input: one leg feeds d, the other becomes a new output
    feeds = []
    new_outs = []
    for dim in d.inputs:
        c = b.add(cap_cls(dim))
        feeds.append((c, 0))
        new_outs.append(((c, 1), dim))
    outs = b.insert(d, feeds)
    for j, (src, dim) in enumerate(zip(outs, d.outputs)):
        c = b.add(cup_cls(dim))
        b.connect(src, (c, 0))
        b.connect(b.input(j), (c, 1))
    for src, dim in new_outs:
        b.output(src, dim)
    return b.build(check=False)


def validate(d: Diagram) -> BoundarySignature:
    """Check every structural invariant of ``d`` and return its boundary signature."""
    low = 2 if d.calculus == ZX else 1
    unit = "dimension" if d.calculus == ZX else "label"
    for side, dims in (("input", d.inputs), ("output", d.outputs)):
        for i, dim in enumerate(dims):
            if dim < low:
                raise ValidationError(f"{side} slot {i}: {unit} {dim} is below {low}")
    for nid, node in d.nodes.items():
        if not isinstance(node, Node):
            raise ValidationError(f"node {nid}: not a generator")
        if node.calculus != d.calculus:
            raise ValidationError(
                f"node {nid}: {node.kind} belongs to {node.calculus}, diagram is {d.calculus}"
            )

    expected_targets = {("out", j) for j in range(len(d.outputs))}
    expected_sources = {("in", i) for i in range(len(d.inputs))}
    for nid, node in d.nodes.items():
        expected_targets.update((nid, q) for q in range(len(node.inputs)))
        expected_sources.update((nid, p) for p in range(len(node.outputs)))

    for tgt in sorted(expected_targets - set(d.wires), key=repr):
        raise ValidationError(f"dangling {_describe(tgt, 'in')}")
    seen: dict[Source, Target] = {}
    for tgt, src in d.wires.items():
        if tgt not in expected_targets:
            raise ValidationError(f"wire into unknown endpoint {tgt}")
        if src not in expected_sources:
            raise ValidationError(f"wire from unknown endpoint {src}")
        if src in seen:
            raise ValidationError(f"{_describe(src, 'out')} feeds more than one wire")
        seen[src] = tgt
        if d.source_dim(src) != d.target_dim(tgt):
            raise ValidationError(
                f"{unit} mismatch on wire {src} -> {tgt}: "
                f"{d.source_dim(src)} vs {d.target_dim(tgt)}"
            )
    for src in sorted(expected_sources - set(seen), key=repr):
        raise ValidationError(f"dangling {_describe(src, 'out')}")
    return d.signature


def _describe(e, direction: str) -> str:
    if e[0] == "in":
        return f"input slot {e[1]}"
    if e[0] == "out":
        return f"output slot {e[1]}"
    return f"node {e[0]} {'input' if direction == 'in' else 'output'} port {e[1]}"


# -- canonical form ------------------------------------------------------------


def canonical(d: Diagram) -> Diagram:
    """Renumber nodes in a deterministic traversal order.

    Two diagrams that differ only by node ids have equal canonical forms.
    """
    order: list[int] = []
    seen = set()
    consumers = d.consumers()

    def visit(start):
        stack = [start]
        while stack:
            nid = stack.pop()
            if nid in seen:
                continue
            seen.add(nid)
            order.append(nid)
            node = d.nodes[nid]
            nbrs = []
            for q in range(len(node.inputs)):
                src = d.wires[(nid, q)]
                if not isinstance(src[0], str):
                    nbrs.append(src[0])
            for p in range(len(node.outputs)):
                tgt = consumers.get((nid, p))
                if tgt is not None and not isinstance(tgt[0], str):
                    nbrs.append(tgt[0])
            stack.extend(reversed(nbrs))

    for i in range(len(d.inputs)):
        tgt = consumers.get(("in", i))
        if tgt is not None and not isinstance(tgt[0], str):
            visit(tgt[0])
    for j in range(len(d.outputs)):
        src = d.wires[("out", j)]
        if not isinstance(src[0], str):
            visit(src[0])
    # closed components: seed from the node with the smallest serialised form
    rest = [n for n in d.nodes if n not in seen]
    while rest:
        rest.sort(key=lambda n: (d.nodes[n].kind, repr(d.nodes[n].params()), n))
        visit(rest[0])
        rest = [n for n in d.nodes if n not in seen]

    newid = {old: new for new, old in enumerate(order)}
    ren = lambda e: e if isinstance(e[0], str) else (newid[e[0]], e[1])  # noqa: E731
    return Diagram(
        d.calculus,
        {newid[i]: n for i, n in d.nodes.items()},
        {ren(t): ren(s) for t, s in d.wires.items()},
        d.inputs,
        d.outputs,
        check=False,
    )


def structurally_equal(a: Diagram, b: Diagram) -> bool:
    return canonical(a) == canonical(b)


def phase_from(values: Iterable[complex]) -> tuple[complex, ...]:
    return tuple(complex(v) for v in values)


def root_of_unity(d: int, k: int = 1) -> complex:
    return cmath.exp(2j * math.pi * k / d)


# -- substitution --------------------------------------------------------------


class Box:
    """Placeholder node used while splicing; never appears in a finished diagram."""

    kind = "box"

    def __init__(self, calculus: str, inputs: Sequence[int], outputs: Sequence[int]):
        self.calculus = calculus
        self.inputs = tuple(inputs)
        self.outputs = tuple(outputs)


def substitute(
    d: Diagram,
    images: Mapping[int, Diagram],
    calculus: str | None = None,
    boundary=None,
    preserve_ids: bool = False,
) -> tuple[Diagram, dict[int, list[int]]]:
    """Replace each node ``n`` in ``images`` by the diagram ``images[n]``.

    Image boundaries must line up with the replaced node's ports.  Kept nodes
    are carried over unchanged.  Wire chains that run through bare wires of
    several images are followed to their real endpoints; chains that close on
    themselves become a scalar (the carried dimension of the loop).

    ``calculus`` and ``boundary`` (a label map) allow the result to live in a
    different calculus, as translations need.  With ``preserve_ids`` kept nodes
    keep their ids and image nodes are numbered after the largest of them.
    Returns the new diagram and a map from each old node id to its new ids.
    """
    calculus = calculus or d.calculus
    boundary = boundary or (lambda x: x)
    for nid, img in images.items():
        node = d.nodes[nid]
        if len(img.inputs) != len(node.inputs) or len(img.outputs) != len(node.outputs):
            raise CompositionError(
                f"image of node {nid} has arity {len(img.inputs)}->{len(img.outputs)}, "
                f"node has {len(node.inputs)}->{len(node.outputs)}"
            )

    new_nodes: dict[int, Node] = {}
    provenance: dict[int, list[int]] = {}
    inner_id: dict[tuple[int, int], int] = {}
    nxt = 0
    if preserve_ids:
        for nid in d.nodes:
            if nid not in images:
                inner_id[(nid, None)] = nid
                new_nodes[nid] = d.nodes[nid]
                provenance[nid] = [nid]
        nxt = max(d.nodes, default=-1) + 1
    for nid in sorted(d.nodes):
        if preserve_ids and nid not in images:
            continue
        if nid in images:
            provenance[nid] = []
            for inid in sorted(images[nid].nodes):
                inner_id[(nid, inid)] = nxt
                new_nodes[nxt] = images[nid].nodes[inid]
                provenance[nid].append(nxt)
                nxt += 1
        else:
            inner_id[(nid, None)] = nxt
            new_nodes[nxt] = d.nodes[nid]
            provenance[nid] = [nxt]
            nxt += 1

    consumers = d.consumers()
    img_consumers = {nid: img.consumers() for nid, img in images.items()}
    used_host: set = set()  # host sources whose wire has been walked

    def walk_host(src):
        """Follow a host-level source to its final target (None for a closed loop)."""
        while True:
            if src in used_host:
                return None
            used_host.add(src)
            tgt = consumers[src]
            if tgt[0] == "out":
                return tgt
            n, q = tgt
            if n not in images:
                return (inner_id[(n, None)], q)
            itgt = img_consumers[n][("in", q)]
            if itgt[0] != "out":
                return (inner_id[(n, itgt[0])], itgt[1])
            src = (n, itgt[1])

    def walk_image(n, isrc):
        itgt = img_consumers[n][isrc]
        if itgt[0] != "out":
            return (inner_id[(n, itgt[0])], itgt[1])
        return walk_host((n, itgt[1]))

    wires: dict[Target, Source] = {}
    for i in range(len(d.inputs)):
        wires[walk_host(("in", i))] = ("in", i)
    for nid in sorted(d.nodes):
        if nid in images:
            img = images[nid]
            for inid in sorted(img.nodes):
                for p in range(len(img.nodes[inid].outputs)):
                    wires[walk_image(nid, (inid, p))] = (inner_id[(nid, inid)], p)
        else:
            for p in range(len(d.nodes[nid].outputs)):
                wires[walk_host((nid, p))] = (inner_id[(nid, None)], p)

    # host wires never walked form closed loops of bare wire
    scalar_cls = structural(calculus, "scalar")
    for src in sorted(set(consumers) - used_host, key=repr):
        if src in used_host:
            continue
        walk_host(src)
        new_nodes[nxt] = scalar_cls(carried_dim(d.calculus, d.source_dim(src)))
        nxt += 1

    out = Diagram(
        calculus,
        new_nodes,
        wires,
        [boundary(x) for x in d.inputs],
        [boundary(x) for x in d.outputs],
        check=False,
    )
    return out, provenance
