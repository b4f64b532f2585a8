"""Axioms of the finite-dimensional ZW-calculus.

Wire labels follow the ZW convention: label ``a`` carries dimension ``a + 1``.
"""

from __future__ import annotations

from typing import Sequence

from ..diagram import (
    ZW,
    Diagram,
    WNode,
    ZWKet,
    ZWScalar,
    ZWSpider,
    ZWSwap,
    permutation,
    tensor_all,
)
from .base import Param, Rule, SideConditionError, choice, random_complex, register
from .zx import ww_quantities, ww_sides


def node(n) -> Diagram:
    return Diagram.from_node(n)


def wire(*labels: int) -> Diagram:
    return Diagram.wire(ZW, labels)


def rep(d: Diagram, n: int) -> Diagram:
    return tensor_all(ZW, [d] * n)


def spider(r: complex, a: int, n: int, m: int) -> Diagram:
    return node(ZWSpider(r, a, n, m))


def w_split(big: int, smalls: Sequence[int]) -> Diagram:
    return node(WNode(big, tuple(smalls)))


def w_merge(big: int, smalls: Sequence[int]) -> Diagram:
    return node(WNode(big, tuple(smalls), inverted=True))


def unit(a: int) -> Diagram:
    """|0> on label a, as a legless merge."""
    return w_merge(a, ())


def counit(a: int) -> Diagram:
    """<0| on label a, as a legless split."""
    return w_split(a, ())


def _labels(dims: Sequence[int]) -> list[int]:
    return [d - 1 for d in dims if d >= 2] or [1]


def _t(x) -> tuple[int, ...]:
    return tuple(int(v) for v in x)


# -- spiders -------------------------------------------------------------------


def _fuse_build(p):
    n1, m1, n2, m2, a = (int(p[k]) for k in ("n1", "m1", "n2", "m2", "a"))
    r, s = complex(p["r"]), complex(p["s"])
    lhs = (spider(r, a, n1, m1 + 1) @ wire(*(a,) * n2)) >> (wire(*(a,) * m1) @ spider(s, a, 1 + n2, m2))
    return lhs, spider(r * s, a, n1 + n2, m1 + m2), {}


def _fuse_sample(rng, dims):
    return {
        "n1": int(rng.integers(0, 3)), "m1": int(rng.integers(0, 2)),
        "n2": int(rng.integers(0, 2)), "m2": int(rng.integers(0, 3)),
        "a": choice(rng, _labels(dims)), "r": random_complex(rng), "s": random_complex(rng),
    }


register(Rule(
    "Z-FUSE", ZW,
    (Param("n1", "int"), Param("m1", "int"), Param("n2", "int"), Param("m2", "int"),
     Param("a", "label"), Param("r", "complex"), Param("s", "complex")),
    _fuse_build, _fuse_sample,
    doc="Connected Z-spiders fuse; parameters multiply.",
))

register(Rule(
    "Z-ID", ZW, (Param("a", "label"),),
    lambda p: (spider(1, int(p["a"]), 1, 1), wire(int(p["a"])), {}),
    lambda rng, dims: {"a": choice(rng, _labels(dims))},
    doc="The 1->1 Z-spider with parameter 1 is a bare wire.",
))


def _zero_build(p):
    n, m, a = int(p["n"]), int(p["m"]), int(p["a"])
    return spider(0, a, n, m), rep(unit(a), m) @ rep(counit(a), n), {}


register(Rule(
    "Z-ZERO", ZW, (Param("n", "int"), Param("m", "int"), Param("a", "label")),
    _zero_build,
    lambda rng, dims: {"n": int(rng.integers(0, 3)), "m": int(rng.integers(0, 3)), "a": choice(rng, _labels(dims))},
    doc="A Z-spider with parameter 0 disconnects into |0> and <0|.",
))


def _ket_copy_build(p):
    m, a, k, r = int(p["m"]), int(p["a"]), int(p["k"]), complex(p["r"])
    if not 0 < k <= a:
        raise SideConditionError("KET-COPY", "0 < k <= a", f"k={k}, a={a}")
    lhs = node(ZWKet(k, a)) >> spider(r, a, 1, m)
    return lhs, node(ZWScalar(r**k)) @ rep(node(ZWKet(k, a)), m), {}


def _ket_copy_sample(rng, dims):
    a = choice(rng, _labels(dims))
    return {"m": int(rng.integers(0, 4)), "a": a, "k": int(rng.integers(1, a + 1)), "r": random_complex(rng)}


register(Rule(
    "KET-COPY", ZW, (Param("m", "int"), Param("a", "label"), Param("k", "int"), Param("r", "complex")),
    _ket_copy_build, _ket_copy_sample,
    side_conditions=("0 < k <= a",),
    doc="Z-spiders copy the ket k, scaling by r^k.",
))


# -- W-nodes -------------------------------------------------------------------


def _assoc_build(p):
    c, b, pos = int(p["c"]), int(p["b"]), int(p["pos"])
    others, a = _t(p["others"]), _t(p["a"])
    if b < min(c, sum(a)):
        raise SideConditionError("W-ASSOC", "b >= min(c, sum a_i)", f"b={b}")
    if not 0 <= pos <= len(others):
        raise SideConditionError("W-ASSOC", "0 <= pos <= len(others)", f"pos={pos}")
    if a and b < max(a):
        raise SideConditionError("W-ASSOC", "b >= every a_i", f"b={b}")
    left, right = others[:pos], others[pos:]
    lhs = w_split(c, left + (b,) + right) >> (wire(*left) @ w_split(b, a) @ wire(*right))
    return lhs, w_split(c, left + a + right), {}


def _assoc_sample(rng, dims):
    labels = _labels(dims)
    a = tuple(choice(rng, labels) for _ in range(int(rng.integers(1, 3))))
    others = tuple(choice(rng, labels) for _ in range(int(rng.integers(0, 2))))
    c = max(a + others) + int(rng.integers(0, 2))
    lo = max(max(a), min(c, sum(a)))
    b = int(rng.integers(lo, c + 1))
    return {"c": c, "b": b, "a": a, "others": others, "pos": int(rng.integers(len(others) + 1))}


register(Rule(
    "W-ASSOC", ZW,
    (Param("c", "label"), Param("b", "label"), Param("a", "labels"),
     Param("others", "labels"), Param("pos", "int")),
    _assoc_build, _assoc_sample,
    side_conditions=("b >= min(c, sum a_i)",),
    doc="Splitting leg b of a W-node again equals one wider W-node.",
))


def _phase_build(p):
    big, smalls, r = int(p["big"]), _t(p["smalls"]), complex(p["r"])
    if not smalls:
        raise SideConditionError("W-PHASE", "n >= 1 small legs")
    lhs = spider(r, big, 1, 1) >> w_split(big, smalls)
    rhs = w_split(big, smalls) >> tensor_all(ZW, [spider(r, b, 1, 1) for b in smalls])
    return lhs, rhs, {}


def _phase_sample(rng, dims):
    labels = _labels(dims)
    smalls = tuple(choice(rng, labels) for _ in range(int(rng.integers(1, 3))))
    return {"big": max(smalls) + int(rng.integers(0, 2)), "smalls": smalls, "r": random_complex(rng)}


register(Rule(
    "W-PHASE", ZW, (Param("big", "label"), Param("smalls", "labels"), Param("r", "complex")),
    _phase_build, _phase_sample,
    side_conditions=("at least one small leg",),
    doc="A 1->1 Z-spider on the big leg moves onto every small leg.",
))


def _sum_build(p):
    a, r, s = int(p["a"]), complex(p["r"]), complex(p["s"])
    lhs = (spider(r, a, 0, 1) @ spider(s, a, 0, 1)) >> w_merge(a, (a, a))
    return lhs, spider(r + s, a, 0, 1), {}


register(Rule(
    "W-SUM", ZW, (Param("a", "label"), Param("r", "complex"), Param("s", "complex")),
    _sum_build,
    lambda rng, dims: {"a": choice(rng, _labels(dims)), "r": random_complex(rng), "s": random_complex(rng)},
    doc="Merging two Z-states adds their parameters.",
))

register(Rule(
    "SCALAR-ONE", ZW, (),
    lambda p: (node(ZWScalar(1)), Diagram.empty(ZW), {}),
    lambda rng, dims: {},
    doc="The scalar 1 is the empty diagram.",
))


def _unit_build(p):
    a, b, smalls = int(p["a"]), int(p["b"]), _t(p["smalls"])
    lhs = w_split(a, smalls + (b,)) >> (wire(*smalls) @ counit(b))
    return lhs, w_split(a, smalls), {}


def _unit_sample(rng, dims):
    labels = _labels(dims)
    smalls = tuple(choice(rng, labels) for _ in range(int(rng.integers(0, 3))))
    b = choice(rng, labels)
    return {"a": max(smalls + (b,)) + int(rng.integers(0, 2)), "b": b, "smalls": smalls}


register(Rule(
    "W-UNIT", ZW, (Param("a", "label"), Param("b", "label"), Param("smalls", "labels")),
    _unit_build, _unit_sample,
    doc="Discarding a small leg with <0| removes it.",
))


def _ww_build(p):
    a, b, c = _t(p["a"]), _t(p["b"]), int(p["c"])
    if c < min(sum(a), sum(b)):
        raise SideConditionError("W-BIALG", "c >= min(sum a_i, sum b_i)", f"c={c}")
    if c < max(a + b):
        raise SideConditionError("W-BIALG", "c >= every a_i and b_i", f"c={c}")
    ell, rows, cols = ww_quantities(a, b)
    lhs, rhs = ww_sides(
        a, b, c, w_split, w_merge, wire,
        lambda labels, order: permutation(ZW, labels, order),
        lambda parts: tensor_all(ZW, parts),
    )
    return lhs, rhs, {"ell": ell, "A": rows, "B": cols}


def _ww_sample(rng, dims):
    from .zx import ww_sample

    return ww_sample(rng, dims)


register(Rule(
    "W-BIALG", ZW, (Param("a", "labels"), Param("b", "labels"), Param("c", "label")),
    _ww_build, _ww_sample,
    side_conditions=("c >= min(sum a_i, sum b_i)",),
    doc="W bialgebra: merge-then-split equals pairwise splits and merges with l_ij = min(a_i, b_j).",
))


def _zw_bialg_build(p):
    a = int(p["a"])
    lhs = w_merge(a, (a, a)) >> spider(1, a, 1, 2)
    rhs = (
        (spider(1, a, 1, 2) @ spider(1, a, 1, 2))
        >> (wire(a) @ node(ZWSwap(a, a)) @ wire(a))
        >> (w_merge(a, (a, a)) @ w_merge(a, (a, a)))
    )
    return lhs, rhs, {}


register(Rule(
    "ZW-BIALG", ZW, (Param("a", "label"),),
    _zw_bialg_build,
    lambda rng, dims: {"a": choice(rng, _labels(dims))},
    doc="Z copy and W merge form a bialgebra.",
))


def _comm_build(p):
    a, b1, b2 = int(p["a"]), int(p["b1"]), int(p["b2"])
    lhs = w_split(a, (b1, b2)) >> node(ZWSwap(b1, b2))
    return lhs, w_split(a, (b2, b1)), {}


def _comm_sample(rng, dims):
    labels = _labels(dims)
    b1, b2 = choice(rng, labels), choice(rng, labels)
    return {"a": max(b1, b2) + int(rng.integers(0, 2)), "b1": b1, "b2": b2}


register(Rule(
    "W-COMM", ZW, (Param("a", "label"), Param("b1", "label"), Param("b2", "label")),
    _comm_build, _comm_sample,
    doc="W-nodes are cocommutative.",
))

register(Rule(
    "W-ID", ZW, (Param("a", "label"),),
    lambda p: (w_split(int(p["a"]), (int(p["a"]),)), wire(int(p["a"])), {}),
    lambda rng, dims: {"a": choice(rng, _labels(dims))},
    doc="A W-node with one small leg of the same label is a bare wire.",
))


def _split_build(p):
    k, a = int(p["k"]), int(p["a"])
    if not 0 < k <= a:
        raise SideConditionError("KET-SPLIT", "0 < k <= a", f"k={k}, a={a}")
    rhs = rep(node(ZWKet(1, 1)), k) >> w_merge(a, (1,) * k)
    return node(ZWKet(k, a)), rhs, {}


def _split_sample(rng, dims):
    a = choice(rng, _labels(dims))
    return {"a": a, "k": int(rng.integers(1, a + 1))}


register(Rule(
    "KET-SPLIT", ZW, (Param("k", "int"), Param("a", "label")),
    _split_build, _split_sample,
    side_conditions=("0 < k <= a",),
    doc="The ket k is k merged copies of the ket 1.",
))
