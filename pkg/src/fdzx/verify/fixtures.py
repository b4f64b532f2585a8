"""Hand-built fixture pairs for the derived ZX identities.

Each entry of :data:`A1_FIXTURES` takes a dimension and an rng and returns a
list of ``(tag, lhs, rhs)`` triples.  An entry set to ``None`` is listed as
untranscribed by the suite rather than skipped.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .. import builders as B
from ..diagram import ZX, BasisKet, Cap, Cup, Diagram, XSpider, ZSpider, permutation, transpose
from ..rules.base import get_rule, instantiate, random_complex, random_phase
from ..rules.rewrite import Step, find_sites
from ..rules.zx import reverse_phase

Fixture = Callable[[int, np.random.Generator], list[tuple[str, Diagram, Diagram]]]


def _x(a: int, n: int, m: int) -> Diagram:
    return B.node(XSpider(a, n, m))


def _x_fusion(a, rng):
    out = []
    for n1, m1, n2, m2 in ((1, 1, 1, 1), (2, 0, 1, 2), (0, 1, 2, 0)):
        lhs = (_x(a, n1, m1 + 1) @ B.wire(*(a,) * n2)) >> (B.wire(*(a,) * m1) @ _x(a, 1 + n2, m2))
        out.append((f"{n1}{m1}{n2}{m2}", lhs, _x(a, n1 + n2, m1 + m2)))
    return out


def _scalar_spider(a, rng):
    x = random_complex(rng)
    return [("x", B.node(ZSpider((), (), (1, x - 1))), B.scalar(x))]


def _x_unit(a, rng):
    return [("", _x(a, 0, 1), B.node(BasisKet(0, a)))]


def _dualizer_transpose(a, rng):
    return [("", transpose(B.dualizer(a)), B.dualizer(a))]


def _x_copies_plus(a, rng):
    plus = B.z(0, 1, a)
    return [("", plus >> _x(a, 1, 2), plus @ plus)]


def _bialgebra(a, rng):
    lhs = _x(a, 2, 1) >> B.z(1, 2, a)
    rhs = (B.z(1, 2, a) @ B.z(1, 2, a)) >> permutation(ZX, (a,) * 4, (0, 2, 1, 3)) >> (_x(a, 2, 1) @ _x(a, 2, 1))
    return [("", lhs, rhs)]


def _rule_instances(name):
    def fixture(a, rng):
        out = []
        for t in range(3):
            inst = instantiate(name, get_rule(name).sample(rng, (a,)))
            out.append((str(t), inst.lhs, inst.rhs))
        return out

    return fixture


def _hadamard_colour(a, rng):
    h, hd = B.hadamard(a), B.hadamard(a, dagger=True)
    root = math.sqrt(a)
    merge = B.scalar(root) @ ((hd @ hd) >> B.z(2, 1, a) >> h)
    effect = B.scalar(1 / root) @ (hd >> B.z(1, 0, a))
    return [("merge", _x(a, 2, 1), merge), ("effect", _x(a, 1, 0), effect)]


def _shift_compose(a, rng):
    out = []
    for j in range(a):
        k = int(rng.integers(a))
        out.append((f"{j}+{k}", B.shift(j, a) >> B.shift(k, a), B.shift(j + k, a)))
    return out


def _dualizer_phase(a, rng):
    r = random_phase(rng, a)
    lhs = B.z(1, 1, a, r) >> B.dualizer(a)
    return [("", lhs, B.dualizer(a) >> B.z(1, 1, a, reverse_phase(r)))]


def _embedding_retract(a, rng):
    return [(f"{a}<{b}", B.embed(a, b) >> B.embed(b, a), B.wire(a)) for b in range(a + 1, a + 3)]


def _shift_trace(a, rng):
    out = []
    for k in range(1, a):
        lhs = B.node(Cap(a)) >> (B.shift(k, a) @ B.wire(a)) >> B.node(Cup(a))
        out.append((str(k), lhs, B.scalar(0)))
    return out


def _dualizer_ket(a, rng):
    return [(str(x), B.ket(x, a) >> B.dualizer(a), B.ket(-x % a, a)) for x in range(a)]


def _snake(a, rng):
    lhs = (B.wire(a) @ B.node(Cap(a))) >> (B.node(Cup(a)) @ B.wire(a))
    return [("", lhs, B.wire(a))]


A1_FIXTURES: dict[str, Fixture | None] = {
    "x-fusion": _x_fusion,
    "scalar-spider": _scalar_spider,
    "x-unit-ket": _x_unit,
    "dualizer-transpose": _dualizer_transpose,
    "x-copies-plus": _x_copies_plus,
    "zx-bialgebra": _bialgebra,
    "phase-copy": _rule_instances("S4"),
    "hadamard-spider": _rule_instances("HX"),
    "hadamard-colour": _hadamard_colour,
    "shift-compose": _shift_compose,
    "dualizer-phase": _dualizer_phase,
    "embedding-retract": _embedding_retract,
    "shift-trace": _shift_trace,
    "dualizer-ket": _dualizer_ket,
    "snake": _snake,
}


def hadamard_colour_script(a: int) -> tuple[Diagram, list[Step], Diagram]:
    """Curated replay: X(2->1) padded by u * u^-1 becomes u * H Z (H+ (x) H+).

    The start diagram is GlobalScalar(u) (x) [HX right side at n=2, m=1], and
    one right-to-left HX step turns it into the colour-changed form.
    """
    u = math.sqrt(a)
    hx = instantiate("HX", {"n": 2, "m": 1, "d": a})
    start = B.scalar(u) @ hx.rhs
    # the two scalars differ (u vs 1/u), so the site is unique
    (site,) = find_sites(start, hx.rhs)
    target = _hadamard_colour(a, None)[0][2]
    return start, [Step("HX", {"n": 2, "m": 1, "d": a}, site, "rl")], target


def sum_coefficients(a: int, r: complex, s: complex) -> np.ndarray:
    """Expected c_k = (r + s)^k / k! of a merged pair of Z-states."""
    return np.array([(r + s) ** k / math.factorial(k) for k in range(a + 1)])
