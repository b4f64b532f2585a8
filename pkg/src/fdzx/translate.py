"""Translations between the calculi.

``to_zw`` sends a ZX wire of dimension d to the ZW label d - 1 and ``to_zx``
sends the ZW label a to the ZX dimension a + 1.  Both translate generator by
generator and splice the images into the original wiring, so they are
compositional by construction.  Translations never simplify their output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import builders as B
from .diagram import (
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
    substitute,
    tensor_all,
    validate,
)
from .rules.rewrite import replay
from .semantics import DEFAULT_TOL, EXACT, EquivalenceVerdict, diagrams_equal
from .serialize import canonical_json


@dataclass(frozen=True)
class TranslationTrace:
    source: Diagram
    target: Diagram
    provenance: dict[int, list[int]]

    def to_json(self) -> dict:
        return {
            "source_calculus": self.source.calculus,
            "target_calculus": self.target.calculus,
            "provenance": {str(k): v for k, v in sorted(self.provenance.items())},
        }


def _fact_sqrt(k: int) -> float:
    return math.sqrt(math.factorial(k))


# -- ZW building blocks --------------------------------------------------------


def _zw(n: Node) -> Diagram:
    return Diagram.from_node(n)


def _zw_wire(*labels: int) -> Diagram:
    return Diagram.wire(ZW, labels)


def normal_form_roots(values: Sequence[complex]) -> np.ndarray:
    """Parameters c_1..c_L with sqrt(i!) e_i(c) = values[i] for i >= 1.

    ``values[0]`` must be 1.  The c_j are minus the roots of
    x^L + e_1 x^(L-1) + ... + e_L, polished with a few Newton steps.
    """
    values = np.asarray(values, dtype=np.complex128)
    L = len(values) - 1
    e = np.array([values[i] / _fact_sqrt(i) for i in range(L + 1)])
    poly = np.polynomial.Polynomial(e[::-1])  # coefficients low to high: e_L, ..., e_1, 1
    roots = np.roots(e) if L > 0 else np.zeros(0, dtype=np.complex128)
    roots = np.concatenate([roots, np.zeros(L - len(roots))])  # np.roots drops zero roots
    deriv = poly.deriv()
    for _ in range(3):
        dv = deriv(roots)
        ok = np.abs(dv) > 1e-300
        step = np.zeros_like(roots)
        step[ok] = poly(roots[ok]) / dv[ok]
        roots = roots - step
    return -roots


def zw_state(label: int, values: Sequence[complex]) -> Diagram:
    """A ZW state with coefficients ``values`` (``values[0]`` must be 1).

    Label-1 spiders |0> + c_j |1> merged by one W-node give
    sum_i sqrt(i!) e_i(c) |i>, the ZW normal form of a single-wire state.
    """
    if len(values) != label + 1:
        raise ValueError(f"a label-{label} state needs {label + 1} coefficients")
    cs = normal_form_roots(values)
    parts = tensor_all(ZW, [_zw(ZWSpider(complex(c), 1, 0, 1)) for c in cs])
    if label == 1:
        return parts
    return parts >> _zw(WNode(label, (1,) * label, inverted=True))


def zw_diag(label: int, f: Sequence[complex]) -> Diagram:
    """sum_k f_k |k><k| (needs f_0 = 1): a 2->1 Z-spider fed by a normal-form state."""
    values = [f[k] / _fact_sqrt(k) for k in range(label + 1)]
    return (_zw_wire(label) @ zw_state(label, values)) >> _zw(ZWSpider(1, label, 2, 1))


def zw_effect(label: int, h: Sequence[complex]) -> Diagram:
    """sum_k h_k <k| (needs h_0 = 1)."""
    return (_zw_wire(label) @ zw_state(label, h)) >> _zw(ZWSpider(1, label, 2, 0))


def mod_gadget(a: int) -> Diagram:
    """ZW diagram from label 2a-1 to label a-1 interpreting to sum_k |k mod a><k|.

    Reweigh by 1/sqrt(binom(k, a)) above a, split into legs (a-1, a), and keep
    only the components where the second leg holds 0 or a.
    """
    if a < 2:
        raise ValueError("mod_gadget needs a >= 2")
    top = 2 * a - 1
    f = [1.0 if k < a else 1 / math.sqrt(math.comb(k, a)) for k in range(top + 1)]
    h = [1.0] + [0.0] * (a - 1) + [1.0]
    split = _zw(WNode(top, (a - 1, a)))
    return zw_diag(top, f) >> split >> (_zw_wire(a - 1) @ zw_effect(a, h))


def _zw_z_spider(node: ZSpider, offset: int) -> Diagram:
    n, m = len(node.in_dims), len(node.out_dims)
    a = node.dim
    L = a - offset
    if L < 1:
        raise ValueError(f"dimension {a} has no ZW label under offset {offset}")
    # the extra input carries r_k / sqrt(k!)^(n+m-1)
    values = [node.phase[k] / _fact_sqrt(k) ** (n + m - 1) for k in range(a)]
    values = values[: L + 1] + [0] * (L + 1 - a)
    core = (_zw_wire(*(L,) * n) @ zw_state(L, values)) >> _zw(ZWSpider(1, L, n + 1, m))
    ins = tensor_all(ZW, [
        _zw_wire(L) if d - offset == L else _zw(WNode(d - offset, (L,)))
        for d in node.in_dims
    ])
    outs = tensor_all(ZW, [
        _zw_wire(L) if d - offset == L else _zw(WNode(d - offset, (L,), inverted=True))
        for d in node.out_dims
    ])
    return ins >> core >> outs


def _zw_x21(a: int, offset: int) -> Diagram:
    L = a - offset
    top = 2 * a - 1
    up = [_fact_sqrt(k) for k in range(L + 1)]
    down = [1 / _fact_sqrt(k) for k in range(top + 1)]
    merge = _zw(WNode(top, (L, L), inverted=True))
    return (zw_diag(L, up) @ zw_diag(L, up)) >> merge >> zw_diag(top, down) >> mod_gadget(a)


def zw_image(node: Node, offset: int = 1) -> Diagram:
    """ZW image of one ZX generator."""
    lab = lambda d: d - offset  # noqa: E731
    if isinstance(node, ZSpider):
        return _zw_z_spider(node, offset)
    if isinstance(node, XSpider):
        if (node.n_in, node.n_out) == (2, 1):
            return _zw_x21(node.dim, offset)
        expanded = B.x_spider(node.dim, node.n_in, node.n_out)
        return to_zw(expanded, offset).target
    if isinstance(node, Embedding):
        a, b = lab(node.dim_in), lab(node.dim_out)
        return _zw(WNode(b, (a,), inverted=True)) if b >= a else _zw(WNode(a, (b,)))
    if isinstance(node, BasisKet):
        j = node.index
        if j == 0:
            return _zw(ZWSpider(0, lab(node.dim), 0, 1))
        return _zw(ZWScalar(1 / _fact_sqrt(j))) @ _zw(ZWKet(j, lab(node.dim)))
    if isinstance(node, Identity):
        return _zw(ZWIdentity(lab(node.dim)))
    if isinstance(node, Swap):
        return _zw(ZWSwap(lab(node.a), lab(node.b)))
    if isinstance(node, Cap):
        return _zw(ZWCap(lab(node.dim)))
    if isinstance(node, Cup):
        return _zw(ZWCup(lab(node.dim)))
    if isinstance(node, GlobalScalar):
        return _zw(ZWScalar(node.value))
    raise TypeError(f"{node.kind} is not a ZX generator")


def zx_image(node: Node) -> Diagram:
    """ZX image of one ZW generator."""
    if isinstance(node, ZWSpider):
        a = node.label
        phase = [node.r**k * _fact_sqrt(k) ** (node.n_in + node.n_out - 2) for k in range(a + 1)]
        phase[0] = 1
        return B.node(ZSpider((a + 1,) * node.n_in, (a + 1,) * node.n_out, phase))
    if isinstance(node, WNode):
        return B.zx_w_node(node.big, node.smalls, node.inverted)
    if isinstance(node, ZWKet):
        k, a = node.index, node.label
        if 0 < k <= a:
            return B.scalar(_fact_sqrt(k)) @ B.ket(k, a + 1)
        return B.scalar(0) @ B.ket(0, a + 1)
    if isinstance(node, ZWScalar):
        return B.scalar(node.value)
    if isinstance(node, ZWIdentity):
        return B.node(Identity(node.dim + 1))
    if isinstance(node, ZWSwap):
        return B.node(Swap(node.a + 1, node.b + 1))
    if isinstance(node, ZWCap):
        return B.node(Cap(node.dim + 1))
    if isinstance(node, ZWCup):
        return B.node(Cup(node.dim + 1))
    raise TypeError(f"{node.kind} is not a ZW generator")


def _translate(d: Diagram, target: str, image: Callable[[Node], Diagram], boundary) -> TranslationTrace:
    images = {nid: image(n) for nid, n in d.nodes.items()}
    out, prov = substitute(d, images, calculus=target, boundary=boundary)
    validate(out)
    return TranslationTrace(d, out, prov)


def to_zw(d: Diagram, offset: int = 1) -> TranslationTrace:
    """ZX to ZW.  ``offset`` is the object map d -> d - offset; only 1 is sound."""
    if d.calculus != ZX:
        raise ValueError(f"to_zw needs a ZX diagram, got {d.calculus}")
    validate(d)
    return _translate(d, ZW, lambda n: zw_image(n, offset), lambda x: x - offset)


def to_zx(d: Diagram) -> TranslationTrace:
    """ZW to ZX."""
    if d.calculus != ZW:
        raise ValueError(f"to_zx needs a ZW diagram, got {d.calculus}")
    validate(d)
    return _translate(d, ZX, zx_image, lambda x: x + 1)


def translate(d: Diagram, to: str) -> TranslationTrace:
    if to == d.calculus:
        raise ValueError(f"diagram is already {to}")
    return to_zw(d) if to == ZW else to_zx(d)


# Rewrite scripts that bring a round-trip image back to the generator itself.
# For these generators the images are already the generator, so the scripts
# are empty; structural equality is still checked after replaying them.
CURATED_SCRIPTS: dict[str, list] = {"identity": [], "swap": [], "cap": [], "cup": []}


@dataclass(frozen=True)
class RoundTrip:
    image: Diagram
    semantic: EquivalenceVerdict
    structural: bool | None  # None when no curated script exists

    @property
    def ok(self) -> bool:
        return self.semantic.equal and self.structural is not False


def round_trip_zx(d: Diagram, tol: float = DEFAULT_TOL, offset: int = 1) -> RoundTrip:
    """ZX -> ZW -> ZX, with a semantic verdict and, for curated generators, a structural one."""
    image = to_zx(to_zw(d, offset).target).target
    if image.signature != d.signature:
        bad = EquivalenceVerdict(False, float("inf"), EXACT)
        return RoundTrip(image, bad, None)
    semantic = diagrams_equal(d, image, tol)
    structural = None
    kinds = {n.kind for n in d.nodes.values()}
    if len(d.nodes) == 1 and kinds <= set(CURATED_SCRIPTS):
        final, _ = replay(image, CURATED_SCRIPTS[kinds.pop()], tol)
        structural = canonical_json(final) == canonical_json(d)
    return RoundTrip(image, semantic, structural)
