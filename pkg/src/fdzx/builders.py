"""Derived ZX diagrams assembled from the primitive generators."""

from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np

from .diagram import (
    ZX,
    BasisKet,
    Cup,
    Diagram,
    Embedding,
    GlobalScalar,
    ValidationError,
    XSpider,
    ZSpider,
    compose_par,
    tensor_all,
    transpose,
)


def node(n) -> Diagram:
    return Diagram.from_node(n)


def wire(*dims: int) -> Diagram:
    return Diagram.wire(ZX, dims)


def scalar(c: complex) -> Diagram:
    return node(GlobalScalar(c))


def ones(a: int) -> tuple[complex, ...]:
    return (1,) * a


def ket(j: int, a: int) -> Diagram:
    return node(BasisKet(j, a))


def bra(j: int, a: int) -> Diagram:
    return transpose(ket(j, a))


def embed(a: int, b: int) -> Diagram:
    """E_{a->b}; a bare wire when a == b."""
    return wire(a) if a == b else node(Embedding(a, b))


def z(n: int, m: int, a: int, phase: Sequence[complex] | None = None) -> Diagram:
    """Qudit Z-spider with ``n`` inputs and ``m`` outputs of dimension ``a``."""
    return node(ZSpider((a,) * n, (a,) * m, ones(a) if phase is None else phase))


def general_z_spider(in_dims: Sequence[int], out_dims: Sequence[int], r: Sequence[complex]) -> Diagram:
    """Mixed-dimensional Z-spider built from a qudit spider and embeddings.

    The spider lives in the minimal leg dimension ``a``; every other leg is
    reached through an embedding, which zero-pads the coefficients.
    """
    in_dims, out_dims, r = tuple(in_dims), tuple(out_dims), tuple(r)
    legs = in_dims + out_dims
    if not legs:
        return node(ZSpider((), (), r))
    a = min(legs)
    if len(r) != a:
        raise ValidationError(
            f"phase vector has length {len(r)}, expected the minimal leg dimension {a}"
        )
    core = z(len(in_dims), len(out_dims), a, r)
    top = tensor_all(ZX, [embed(d, a) for d in in_dims])
    bottom = tensor_all(ZX, [embed(a, d) for d in out_dims])
    return top >> core >> bottom


def _x_merge(a: int, n: int) -> Diagram:
    """X(n -> 1) by folding the binary X-spider leftwards."""
    if n == 0:
        return ket(0, a)
    if n == 1:
        return wire(a)
    d = node(XSpider(a, 2, 1))
    for _ in range(n - 2):
        d = compose_par(d, wire(a)) >> node(XSpider(a, 2, 1))
    return d


def x_spider(a: int, n: int, m: int) -> Diagram:
    """X-spider with ``n`` inputs and ``m`` outputs, unit scalar.

    Built inductively: X(2->1) is primitive, X(n->1) folds it, X(1->m) is the
    transpose of X(m->1), |0> and <0| close off the legless sides.
    """
    if a < 2:
        raise ValidationError(f"x_spider: dimension {a} is below 2")
    if n < 0 or m < 0:
        raise ValidationError("x_spider: negative arity")
    if n == 0 and m == 0:
        return Diagram.empty(ZX)
    if m == 0:
        return _x_merge(a, n) >> bra(0, a)
    split = transpose(_x_merge(a, m)) if m != 1 else wire(a)
    if n == 0:
        return ket(0, a) >> split
    return _x_merge(a, n) >> split


def dualizer(a: int) -> Diagram:
    """D: |k> -> |-k mod a>."""
    return (wire(a) @ x_spider(a, 0, 2)) >> (node(Cup(a)) @ wire(a))


def shift(j: int, a: int) -> Diagram:
    """P_j: |k> -> |k + j mod a>."""
    return (ket(j % a, a) @ wire(a)) >> node(XSpider(a, 2, 1))


def k_gate(j: int, a: int) -> Diagram:
    """K_j: |k> -> |j - k mod a>."""
    return dualizer(a) >> shift(j, a)


def fourier(d: int, inverse: bool = False) -> Diagram:
    """Unnormalised Fourier matrix F_{jk} = w^{jk}, w = exp(2 pi i / d).

    Uses w^{jk} = g(j + k) / (g(j) g(k)) with g(s) = exp(i pi s^2 / d); the sum
    j + k is formed in dimension 2d so it never wraps.
    """
    sign = -1 if inverse else 1
    g = [cmath.exp(sign * 1j * math.pi * s * s / d) for s in range(2 * d)]
    g_inv_d = tuple(1 / x for x in g[:d])
    adder = (embed(d, 2 * d) @ embed(d, 2 * d)) >> node(XSpider(2 * d, 2, 1)) >> z(1, 0, 2 * d, g)
    # input k -> weighted single copy g(k)^-1 |k>; state sum_j g(j)^-1 |j, j>
    weigh = z(1, 1, d, g_inv_d)
    pair = z(0, 2, d, g_inv_d)
    return (weigh @ pair) >> (adder @ wire(d))


def hadamard(d: int, dagger: bool = False) -> Diagram:
    """H = F / sqrt(d) (or its adjoint)."""
    return fourier(d, dagger) @ scalar(1 / math.sqrt(d))


def z_state(a: int, phase: Sequence[complex]) -> Diagram:
    return z(0, 1, a, phase)


def zx_w_node(big: int, smalls: Sequence[int], inverted: bool = False) -> Diagram:
    """ZX image of a W-node on ZW labels (carried dims ``label + 1``).

    sqrt(K!) on the big leg, an X-spider in a dimension large enough that the
    small labels never wrap, and 1/sqrt(k!) on each small leg.
    """
    smalls = tuple(smalls)
    total = sum(smalls)
    dim = max(total + 1, 2)
    big_phase = z(1, 1, big + 1, [math.sqrt(math.factorial(s)) for s in range(big + 1)])
    legs = []
    for b in smalls:
        inv = [1 / math.sqrt(math.factorial(k)) for k in range(b + 1)]
        if inverted:
            legs.append(z(1, 1, b + 1, inv) >> embed(b + 1, dim))
        else:
            legs.append(embed(dim, b + 1) >> z(1, 1, b + 1, inv))
    leg_layer = tensor_all(ZX, legs)
    if inverted:
        return leg_layer >> x_spider(dim, len(smalls), 1) >> embed(dim, big + 1) >> big_phase
    return big_phase >> embed(big + 1, dim) >> x_spider(dim, 1, len(smalls)) >> leg_layer


def phase_vector(values, a: int) -> tuple[complex, ...]:
    v = tuple(complex(x) for x in np.asarray(values).reshape(-1))
    if len(v) != a:
        raise ValidationError(f"phase vector has length {len(v)}, expected {a}")
    return v
