"""Seeded random diagrams.

Grammar: start from a row of boundary wires, then repeatedly pick a generator
whose inputs match a contiguous slice of the current row and put it there,
with bare wires to either side.  Each step is one sequential block made of a
parallel composition.  The width of the row never exceeds ``max_width``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..diagram import (
    ZW,
    ZX,
    BasisKet,
    Cap,
    Cup,
    Diagram,
    Embedding,
    GlobalScalar,
    Identity,
    Node,
    Swap,
    WNode,
    XSpider,
    ZSpider,
    ZWCap,
    ZWCup,
    ZWIdentity,
    ZWKet,
    ZWScalar,
    ZWSpider,
    ZWSwap,
)
from ..rules.base import random_complex, random_phase


@dataclass(frozen=True)
class RandomDiagramSpec:
    """Configuration for :func:`random_diagram`.

    ``dims`` are carried dimensions for both calculi, so a ZW diagram drawn
    with dims (2, 3, 4) uses labels 1, 2, 3.
    """

    calculus: str = ZX
    max_generators: int = 8
    dims: tuple[int, ...] = (2, 3, 4)
    max_width: int = 4
    seed: int = 0
    allow_closed: bool = True

    def check(self) -> None:
        if self.calculus not in (ZX, ZW):
            raise ValueError(f"unknown calculus {self.calculus!r}")
        if self.max_generators < 1:
            raise ValueError("max_generators must be at least 1")
        if not self.dims or min(self.dims) < 2:
            raise ValueError("dims must be a non-empty set of dimensions >= 2")
        if self.max_width < 0:
            raise ValueError("max_width must be non-negative")
        if self.max_width == 0 and not self.allow_closed:
            raise ValueError("max_width 0 only admits closed diagrams, which are disallowed")


def _labels(spec: RandomDiagramSpec) -> list[int]:
    if spec.calculus == ZX:
        return sorted(set(spec.dims))
    return sorted({d - 1 for d in spec.dims})


def _candidates_zx(rng, row: list[int], labels: list[int], room: int):
    """Yield (start, length, node) choices for the current row."""
    pick = lambda: int(rng.choice(labels))  # noqa: E731
    out = []
    n = len(row)
    # generators with no inputs
    for start in range(n + 1):
        if room >= 1:
            a = pick()
            out.append((start, 0, BasisKet(int(rng.integers(a)), a)))
            k = int(rng.integers(1, min(room, 2) + 1))
            dims = [pick() for _ in range(k)]
            out.append((start, 0, ZSpider((), tuple(dims), random_phase(rng, min(dims)))))
        if room >= 2:
            out.append((start, 0, Cap(pick())))
        out.append((start, 0, GlobalScalar(random_complex(rng))))
    for start in range(n):
        a = row[start]
        out.append((start, 1, Identity(a)))
        out.append((start, 1, Embedding(a, pick())))
        k = int(rng.integers(0, min(room + 1, 2) + 1))
        dims = [pick() for _ in range(k)]
        out.append((start, 1, ZSpider((a,), tuple(dims), random_phase(rng, min([a] + dims)))))
        kx = int(rng.integers(0, min(room + 1, 2) + 1))
        out.append((start, 1, XSpider(a, 1, kx)))
        if start + 1 < n:
            b = row[start + 1]
            out.append((start, 2, Swap(a, b)))
            k = int(rng.integers(0, min(room + 2, 2) + 1))
            dims = [pick() for _ in range(k)]
            out.append((start, 2, ZSpider((a, b), tuple(dims), random_phase(rng, min([a, b] + dims)))))
            if a == b:
                out.append((start, 2, Cup(a)))
                out.append((start, 2, XSpider(a, 2, int(rng.integers(0, min(room + 2, 2) + 1)))))
    return out


def _candidates_zw(rng, row: list[int], labels: list[int], room: int):
    pick = lambda: int(rng.choice(labels))  # noqa: E731
    out = []
    n = len(row)
    for start in range(n + 1):
        if room >= 1:
            a = pick()
            out.append((start, 0, ZWKet(int(rng.integers(0, a + 2)), a)))
            out.append((start, 0, ZWSpider(random_complex(rng), a, 0, int(rng.integers(1, min(room, 2) + 1)))))
            out.append((start, 0, WNode(a, (), inverted=True)))
        if room >= 2:
            out.append((start, 0, ZWCap(pick())))
        out.append((start, 0, ZWScalar(random_complex(rng))))
    for start in range(n):
        a = row[start]
        out.append((start, 1, ZWIdentity(a)))
        m = int(rng.integers(0, min(room + 1, 2) + 1))
        out.append((start, 1, ZWSpider(random_complex(rng), a, 1, m)))
        smalls = tuple(min(pick(), a) for _ in range(int(rng.integers(0, min(room + 1, 2) + 1))))
        out.append((start, 1, WNode(a, smalls)))
        out.append((start, 1, WNode(max(a, pick()), (a,), inverted=True)))
        if start + 1 < n:
            b = row[start + 1]
            out.append((start, 2, ZWSwap(a, b)))
            out.append((start, 2, WNode(max(a, b, pick()), (a, b), inverted=True)))
            if a == b:
                out.append((start, 2, ZWCup(a)))
                m = int(rng.integers(0, min(room + 2, 2) + 1))
                out.append((start, 2, ZWSpider(random_complex(rng), a, 2, m)))
    return out


def random_diagram(spec: RandomDiagramSpec, rng: np.random.Generator | None = None) -> Diagram:
    """Draw a diagram; reproducible from ``spec.seed`` when ``rng`` is omitted."""
    spec.check()
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    labels = _labels(spec)
    width = int(rng.integers(0 if spec.allow_closed else 1, spec.max_width + 1))
    inputs = [int(rng.choice(labels)) for _ in range(width)]
    wires = {}
    nodes: dict[int, Node] = {}
    # the current row holds (label, source endpoint)
    row = [(lab, ("in", i)) for i, lab in enumerate(inputs)]
    steps = int(rng.integers(1, spec.max_generators + 1))
    gen = _candidates_zx if spec.calculus == ZX else _candidates_zw
    for nid in range(steps):
        dims = [lab for lab, _ in row]
        cands = gen(rng, dims, labels, spec.max_width - len(row))
        cands = [
            c for c in cands
            if len(row) - c[1] + len(c[2].outputs) <= spec.max_width
            and (spec.allow_closed or len(row) - c[1] + len(c[2].outputs) > 0 or nid < steps - 1)
        ]
        start, k, node = cands[int(rng.integers(len(cands)))]
        nodes[nid] = node
        for q in range(k):
            wires[(nid, q)] = row[start + q][1]
        new = [(lab, (nid, p)) for p, lab in enumerate(node.outputs)]
        row = row[:start] + new + row[start + k:]
    for j, (_, src) in enumerate(row):
        wires[("out", j)] = src
    return Diagram(spec.calculus, nodes, wires, inputs, [lab for lab, _ in row])


def random_diagrams(spec: RandomDiagramSpec, count: int) -> list[Diagram]:
    """``count`` diagrams, the i-th drawn from the seed pair (spec.seed, i)."""
    return [random_diagram(spec, np.random.default_rng([spec.seed, i])) for i in range(count)]


def sample_basis(rng: np.random.Generator, d: Diagram, count: int) -> list[tuple[int, ...]]:
    from ..diagram import carried_dim

    sizes = [carried_dim(d.calculus, x) for x in d.inputs]
    return [tuple(int(rng.integers(s)) for s in sizes) for _ in range(count)]
