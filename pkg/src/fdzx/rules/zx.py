"""Axioms of the finite-dimensional ZX-calculus, plus the derived rules S2, S4 and HX."""

from __future__ import annotations

import cmath
import math
from typing import Sequence

from .. import builders as B
from ..diagram import ZX, Diagram, XSpider, ZSpider, permutation, tensor_all
from .base import Param, Rule, SideConditionError, choice, random_complex, random_phase, register

PAIR_TOL = 1e-12


# -- phase-vector arithmetic ---------------------------------------------------


def reverse_phase(r: Sequence[complex]) -> tuple[complex, ...]:
    """(r_0, r_{a-1}, ..., r_1): index k goes to -k mod a."""
    a = len(r)
    return tuple(r[(-k) % a] for k in range(a))


def convolve_phase_vectors(p: Sequence[complex], q: Sequence[complex], a: int) -> tuple[complex, ...]:
    """Cyclic convolution r_k = sum_i p_i q_{k-i mod a}; r_0 is not normalised.

    >>> convolve_phase_vectors((1, 2), (1, 3), 2)
    ((7+0j), (5+0j))
    """
    if len(p) != a or len(q) != a:
        raise ValueError(f"phase vectors must have length {a}, got {len(p)} and {len(q)}")
    return tuple(complex(sum(p[i] * q[(k - i) % a] for i in range(a))) for k in range(a))


def solve_pc(p: Sequence[complex], a: int, b: int | None = None, c: int | None = None):
    """Find q with q_{i+j mod a} = p_i p_j for all i < b, j < c.

    Returns the vector (entries no constraint reaches are 0) or ``None`` when
    the constraints clash.
    """
    b = a if b is None else b
    c = a if c is None else c
    if len(p) != a:
        raise ValueError(f"p must have length {a}")
    q: list[complex | None] = [None] * a
    for i in range(b):
        for j in range(c):
            s = (i + j) % a
            val = complex(p[i] * p[j])
            if q[s] is None:
                q[s] = val
            elif abs(q[s] - val) > PAIR_TOL * max(1.0, abs(val), abs(q[s])):
                return None
    return tuple(0j if x is None else x for x in q)


def k2_transform(r: Sequence[complex], j: int, d: int) -> tuple[complex, ...]:
    """(r_{k-j} / r_{d-j})_k with subscripts taken mod d; entry 0 is always 1.

    >>> k2_transform((1, 2, 4), 1, 3)[1:]
    ((0.25+0j), (0.5+0j))
    """
    if len(r) != d:
        raise ValueError(f"r must have length {d}")
    den = complex(r[(d - j) % d])
    if den == 0:
        raise SideConditionError("K2", "r_{d-j} != 0", f"j={j}")
    # entry 0 is x / x; pin it so rounding in complex division cannot break r_0 = 1
    return (1 + 0j,) + tuple(complex(r[(k - j) % d]) / den for k in range(1, d))


# -- helpers -------------------------------------------------------------------


def _vec(x) -> tuple[complex, ...]:
    return tuple(complex(v) for v in x)


def _dims(x) -> tuple[int, ...]:
    return tuple(int(v) for v in x)


def _rep(d: Diagram, n: int) -> Diagram:
    return tensor_all(ZX, [d] * n)


def _pick_dims(rng, dims, n):
    return tuple(choice(rng, dims) for _ in range(n))


# -- S1 ------------------------------------------------------------------------


def _s1_normalize(p: dict) -> dict:
    p = dict(p)
    if "a" in p:
        a = p.pop("a")
        for key, side in (("n1", "in1"), ("m1", "out1"), ("n2", "in2"), ("m2", "out2")):
            p.setdefault(side, (a,) * p.pop(key, 1))
        p.setdefault("c", a)
    for side in ("in1", "out1", "in2", "out2"):
        p.setdefault(side, ())
    return p


def _s1_build(p):
    in1, out1, in2, out2 = (_dims(p[k]) for k in ("in1", "out1", "in2", "out2"))
    c = int(p["c"])
    pv, qv = _vec(p["p"]), _vec(p["q"])
    top = ZSpider(in1, out1 + (c,), pv)
    bottom = ZSpider((c,) + in2, out2, qv)
    lhs = (B.node(top) @ B.wire(*in2)) >> (B.wire(*out1) @ B.node(bottom))
    n = min(in1 + out1 + in2 + out2 + (c,))
    legs = in1 + in2 + out1 + out2
    length = min(legs) if legs else n
    r = tuple(pv[k] * qv[k] if k < n else 0j for k in range(length))
    rhs = B.node(ZSpider(in1 + in2, out1 + out2, r))
    return lhs, rhs, {"N": n, "r": r}


def _s1_sample(rng, dims):
    in1 = _pick_dims(rng, dims, int(rng.integers(0, 3)))
    out1 = _pick_dims(rng, dims, int(rng.integers(0, 2)))
    in2 = _pick_dims(rng, dims, int(rng.integers(0, 2)))
    out2 = _pick_dims(rng, dims, int(rng.integers(0, 3)))
    c = choice(rng, dims)
    return {
        "in1": in1, "out1": out1, "in2": in2, "out2": out2, "c": c,
        "p": random_phase(rng, min(in1 + out1 + (c,))),
        "q": random_phase(rng, min((c,) + in2 + out2)),
    }


register(Rule(
    "S1", ZX,
    (
        Param("in1", "dims", "inputs of the upper spider"),
        Param("out1", "dims", "free outputs of the upper spider"),
        Param("in2", "dims", "free inputs of the lower spider"),
        Param("out2", "dims", "outputs of the lower spider"),
        Param("c", "dim", "the connecting wire"),
        Param("p", "cvec", "upper phase vector"),
        Param("q", "cvec", "lower phase vector"),
    ),
    _s1_build, _s1_sample,
    side_conditions=("len(p) and len(q) equal the minimal leg dimension of each spider",),
    doc="Spider fusion: phases multiply, cut off at the minimal dimension.",
    normalize=_s1_normalize,
))


# -- S2 (derived) --------------------------------------------------------------


def _s2_build(p):
    a = int(p["a"])
    return B.z(1, 1, a), B.wire(a), {}


register(Rule(
    "S2", ZX, (Param("a", "dim"),), _s2_build,
    lambda rng, dims: {"a": choice(rng, dims)},
    derived=True,
    doc="A phase-free 1->1 Z-spider is a bare wire.",
))


# -- S4 (derived) --------------------------------------------------------------


def _s4_build(p):
    ins, outs = _dims(p["in_dims"]), _dims(p["out_dims"])
    leg, b, r = int(p["leg"]), int(p["b"]), _vec(p["r"])
    if not 0 <= leg < len(outs):
        raise SideConditionError("S4", "0 <= leg < len(out_dims)", f"leg={leg}")
    lhs = B.node(ZSpider(ins, outs, r)) >> (
        B.wire(*outs[:leg]) @ B.embed(outs[leg], b) @ B.wire(*outs[leg + 1:])
    )
    new_outs = outs[:leg] + (b,) + outs[leg + 1:]
    length = min(ins + new_outs)
    r2 = tuple(r[k] if k < len(r) and k < b else 0j for k in range(length))
    return lhs, B.node(ZSpider(ins, new_outs, r2)), {"r": r2}


def _s4_sample(rng, dims):
    ins = _pick_dims(rng, dims, int(rng.integers(0, 3)))
    outs = _pick_dims(rng, dims, int(rng.integers(1, 3)))
    return {
        "in_dims": ins, "out_dims": outs, "leg": int(rng.integers(len(outs))),
        "b": choice(rng, dims), "r": random_phase(rng, min(ins + outs)),
    }


register(Rule(
    "S4", ZX,
    (Param("in_dims", "dims"), Param("out_dims", "dims"), Param("leg", "int"),
     Param("b", "dim"), Param("r", "cvec")),
    _s4_build, _s4_sample, derived=True,
    doc="An embedding on a spider leg is absorbed by changing that leg's dimension.",
))


# -- D1 ------------------------------------------------------------------------


register(Rule(
    "D1", ZX, (Param("a", "dim"),),
    lambda p: (B.dualizer(int(p["a"])) >> B.dualizer(int(p["a"])), B.wire(int(p["a"])), {}),
    lambda rng, dims: {"a": choice(rng, dims)},
    doc="The dualiser is an involution.",
))


# -- DA ------------------------------------------------------------------------


def _da_build(p):
    n, m, a, r = int(p["n"]), int(p["m"]), int(p["a"]), _vec(p["r"])
    lhs = _rep(B.dualizer(a), n) >> B.z(n, m, a, r) >> _rep(B.dualizer(a), m)
    return lhs, B.z(n, m, a, reverse_phase(r)), {"r_reversed": reverse_phase(r)}


def _da_sample(rng, dims):
    a = choice(rng, dims)
    return {"n": int(rng.integers(0, 3)), "m": int(rng.integers(0, 3)), "a": a, "r": random_phase(rng, a)}


register(Rule(
    "DA", ZX, (Param("n", "int"), Param("m", "int"), Param("a", "dim"), Param("r", "cvec")),
    _da_build, _da_sample,
    doc="Dualisers on every leg reverse the phase vector.",
))


# -- K0 ------------------------------------------------------------------------


def _k0_build(p):
    m, a, k, r = int(p["m"]), int(p["a"]), int(p["k"]), _vec(p["r"])
    if not 0 <= k < a:
        raise SideConditionError("K0", "0 <= k < a", f"k={k}")
    lhs = B.ket(k, a) >> B.z(1, m, a, r)
    rhs = B.scalar(r[k]) @ _rep(B.ket(k, a), m)
    return lhs, rhs, {}


def _k0_sample(rng, dims):
    a = choice(rng, dims)
    return {"m": int(rng.integers(0, 4)), "a": a, "k": int(rng.integers(a)), "r": random_phase(rng, a)}


register(Rule(
    "K0", ZX, (Param("m", "int"), Param("a", "dim"), Param("k", "int"), Param("r", "cvec")),
    _k0_build, _k0_sample,
    side_conditions=("0 <= k < a",),
    doc="A Z-spider copies basis states, picking up the matching phase.",
))


# -- K2 ------------------------------------------------------------------------


def _k2_build(p):
    n, m, d, j, r = int(p["n"]), int(p["m"]), int(p["d"]), int(p["j"]), _vec(p["r"])
    rev = reverse_phase(r)
    if rev[(d - j) % d] == 0:
        raise SideConditionError("K2", "r_j != 0 (the denominator of k-hat)", f"j={j}")
    khat = k2_transform(rev, j, d)
    lhs = _rep(B.k_gate(j, d), n) >> B.z(n, m, d, r)
    rhs = B.scalar(r[j % d]) @ (B.z(n, m, d, khat) >> _rep(B.k_gate(j, d), m))
    return lhs, rhs, {"k_hat": khat}


def _k2_sample(rng, dims):
    d = choice(rng, dims)
    return {
        "n": int(rng.integers(0, 3)), "m": int(rng.integers(0, 3)), "d": d,
        "j": int(rng.integers(d)), "r": random_phase(rng, d),
    }


register(Rule(
    "K2", ZX,
    (Param("n", "int"), Param("m", "int"), Param("d", "dim"), Param("j", "int"), Param("r", "cvec")),
    _k2_build, _k2_sample,
    side_conditions=("r_j != 0",),
    doc="K_j = P_j D passes through a Z-spider, transforming its phase.",
))


# -- ZNF -----------------------------------------------------------------------


def _znf_build(p):
    n, m, a = int(p["n"]), int(p["m"]), int(p["a"])
    e0 = (1,) + (0,) * (a - 1)
    lhs = B.z(n, m, a, e0)
    rhs = _rep(B.node(XSpider(a, 0, 1)), m) @ _rep(B.node(XSpider(a, 1, 0)), n)
    # rhs lists outputs then inputs side by side; both are legless on the other side
    return lhs, rhs, {}


register(Rule(
    "ZNF", ZX, (Param("n", "int"), Param("m", "int"), Param("a", "dim")),
    _znf_build,
    lambda rng, dims: {"n": int(rng.integers(0, 3)), "m": int(rng.integers(0, 3)), "a": choice(rng, dims)},
    doc="A Z-spider with phase (1, 0, ..., 0) disconnects into |0> and <0| pieces.",
))


# -- XM ------------------------------------------------------------------------


def _xm_build(p):
    a, b, c = int(p["a"]), int(p["b"]), int(p["c"])
    n = min(a, b, c)
    phase = tuple(1 if k < n else 0 for k in range(min(a, c)))
    lhs = B.embed(a, b) >> B.embed(b, c)
    return lhs, B.node(ZSpider((a,), (c,), phase)), {"N": n}


register(Rule(
    "XM", ZX, (Param("a", "dim"), Param("b", "dim"), Param("c", "dim")),
    _xm_build,
    lambda rng, dims: {"a": choice(rng, dims), "b": choice(rng, dims), "c": choice(rng, dims)},
    doc="Two embeddings compose to a Z-spider cut off at N = min{a, b, c}.",
))


# -- PA ------------------------------------------------------------------------


def _pa_build(p):
    a, pv, qv = int(p["a"]), _vec(p["p"]), _vec(p["q"])
    r = convolve_phase_vectors(pv, qv, a)
    if r[0] == 0:
        raise SideConditionError("PA", "r_0 != 0", "cannot normalise the summed phase")
    lhs = (B.z_state(a, pv) @ B.z_state(a, qv)) >> B.node(XSpider(a, 2, 1))
    rhs = B.scalar(r[0]) @ B.z_state(a, (1 + 0j,) + tuple(x / r[0] for x in r[1:]))
    return lhs, rhs, {"r": r}


def _pa_sample(rng, dims):
    while True:
        a = choice(rng, dims)
        p, q = random_phase(rng, a), random_phase(rng, a)
        if abs(convolve_phase_vectors(p, q, a)[0]) > 1e-3:
            return {"a": a, "p": p, "q": q}


register(Rule(
    "PA", ZX, (Param("a", "dim"), Param("p", "cvec"), Param("q", "cvec")),
    _pa_build, _pa_sample,
    side_conditions=("r_0 = sum_i p_i q_{-i} != 0",),
    doc="Adding two Z-states convolves their phases.",
))


# -- PC ------------------------------------------------------------------------


def _pc_build(p):
    a, pv = int(p["a"]), _vec(p["p"])
    b, c = int(p.get("b", a)), int(p.get("c", a))
    if b > a or c > a:
        raise SideConditionError("PC", "b <= a and c <= a", f"a={a}, b={b}, c={c}")
    q = solve_pc(pv, a, b, c)
    if q is None:
        raise SideConditionError("PC", "p_i p_j = q_{i+j mod a} is solvable", f"p={pv}")
    lhs = B.z_state(a, q) >> B.x_spider(a, 1, 2) >> (B.embed(a, b) @ B.embed(a, c))
    rhs = B.z_state(b, pv[:b]) @ B.z_state(c, pv[:c])
    return lhs, rhs, {"q": q}


def _pc_sample(rng, dims):
    """Redraw until solvable; draws are characters or non-wrapping geometric vectors."""
    while True:
        a = choice(rng, dims)
        if a >= 3 and rng.random() < 0.5:
            # geometric phases stay consistent while i + j never wraps
            t = random_complex(rng)
            p = tuple(t**i for i in range(a))
            b = int(rng.integers(2, a))
            c = int(rng.integers(2, a + 2 - b))
        else:
            # a character of Z_a is consistent for every b, c
            k = int(rng.integers(a))
            p = tuple(cmath.exp(2j * math.pi * k * i / a) for i in range(a))
            b, c = (int(x) for x in rng.integers(2, a + 1, size=2))
        if solve_pc(p, a, b, c) is not None:
            return {"a": a, "b": b, "c": c, "p": p}


register(Rule(
    "PC", ZX,
    (Param("a", "dim"), Param("p", "cvec"), Param("b", "dim", optional=True), Param("c", "dim", optional=True)),
    _pc_build, _pc_sample,
    side_conditions=("b <= a, c <= a", "p_i p_j = q_{i+j mod a} for i < b, j < c is solvable"),
    doc="Copying a Z-state through an X-spider and embeddings.",
))


# -- WW ------------------------------------------------------------------------


def ww_quantities(a: Sequence[int], b: Sequence[int]):
    """l_ij = min(a_i, b_j), row sums A_i and column sums B_j."""
    ell = [[min(x, y) for y in b] for x in a]
    rows = tuple(sum(r) for r in ell)
    cols = tuple(sum(ell[i][j] for i in range(len(a))) for j in range(len(b)))
    return ell, rows, cols


def ww_sides(a, b, c, w_node, w_merge, wires, perm, rep):
    """Both sides of the W bialgebra, generic over the calculus.

    ``w_node(big, smalls)`` splits a big leg, ``w_merge(big, smalls)`` merges.
    """
    ell, _, _ = ww_quantities(a, b)
    lhs = w_merge(c, a) >> w_node(c, b)
    split = rep([w_node(a[i], ell[i]) for i in range(len(a))])
    flat = [ell[i][j] for i in range(len(a)) for j in range(len(b))]
    order = [i * len(b) + j for j in range(len(b)) for i in range(len(a))]
    merge = rep([w_merge(b[j], [ell[i][j] for i in range(len(a))]) for j in range(len(b))])
    rhs = split >> perm(flat, order) >> merge
    return lhs, rhs


def _ww_check(name, a, b, c):
    if c < min(sum(a), sum(b)):
        raise SideConditionError(name, "c >= min(sum a_i, sum b_i)", f"c={c}")
    if c < max(a + b):
        raise SideConditionError(name, "c >= every a_i and b_i (W-node legs)", f"c={c}")


def _ww_build(p):
    a, b, c = _dims(p["a"]), _dims(p["b"]), int(p["c"])
    _ww_check("WW", a, b, c)
    ell, rows, cols = ww_quantities(a, b)
    lhs, rhs = ww_sides(
        a, b, c,
        lambda big, sm: B.zx_w_node(big, sm),
        lambda big, sm: B.zx_w_node(big, sm, inverted=True),
        B.wire,
        lambda dims, order: permutation(ZX, [d + 1 for d in dims], order),
        lambda parts: tensor_all(ZX, parts),
    )
    return lhs, rhs, {"ell": ell, "A": rows, "B": cols, "A_total": sum(a), "B_total": sum(b)}


def ww_sample(rng, dims):
    labels = [d - 1 for d in dims if d >= 2] or [1]
    a = tuple(choice(rng, labels) for _ in range(int(rng.integers(1, 3))))
    b = tuple(choice(rng, labels) for _ in range(int(rng.integers(1, 3))))
    low = max(min(sum(a), sum(b)), max(a + b))
    return {"a": a, "b": b, "c": low + int(rng.integers(0, 2))}


register(Rule(
    "WW", ZX, (Param("a", "labels"), Param("b", "labels"), Param("c", "label")),
    _ww_build, ww_sample,
    side_conditions=("c >= min(sum a_i, sum b_i)",),
    doc="W bialgebra in ZX form; a, b, c are W labels (ZX dimension label + 1).",
))


# -- HP ------------------------------------------------------------------------


def _hp_build(p):
    a = int(p["a"])
    lhs = B.z(1, 2, a) >> (B.wire(a) @ B.dualizer(a)) >> B.node(XSpider(a, 2, 1))
    rhs = B.z(1, 0, a) @ B.node(XSpider(a, 0, 1))
    return lhs, rhs, {}


register(Rule(
    "HP", ZX, (Param("a", "dim"),), _hp_build,
    lambda rng, dims: {"a": choice(rng, dims)},
    doc="Copy, dualise one copy, add: always |0>, so the input is discarded.",
))


# -- HX (derived) --------------------------------------------------------------


def hx_scalar(d: int, n: int, m: int) -> float:
    """v_{m,n} = d^{(2 - m - n) / 2}."""
    return d ** ((2 - m - n) / 2)


def _hx_build(p):
    n, m, d = int(p["n"]), int(p["m"]), int(p["d"])
    lhs = _rep(B.hadamard(d, dagger=True), n) >> B.z(n, m, d) >> _rep(B.hadamard(d), m)
    v = hx_scalar(d, n, m)
    return lhs, B.scalar(v) @ B.x_spider(d, n, m), {"v": v}


register(Rule(
    "HX", ZX, (Param("n", "int"), Param("m", "int"), Param("d", "dim")),
    _hx_build,
    lambda rng, dims: {"n": int(rng.integers(0, 3)), "m": int(rng.integers(0, 3)), "d": choice(rng, dims)},
    derived=True,
    doc="Hadamards turn a phase-free Z-spider into an X-spider times d^{(2-m-n)/2}.",
))
