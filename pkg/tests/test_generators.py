import math

import numpy as np
import pytest

import oracles
from fdzx import (
    BasisKet,
    Cap,
    Cup,
    Diagram,
    Embedding,
    GlobalScalar,
    Identity,
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
    interpret,
)
from fdzx import builders as B
from fdzx.rules.base import random_complex, random_phase

DIMS = (2, 3, 4)
ATOL = 1e-12


def close(d, expected):
    got = interpret(d).data if isinstance(d, Diagram) else d
    np.testing.assert_allclose(got, expected, atol=ATOL, rtol=0)


def node(n):
    return Diagram.from_node(n)


# -- literal matrices ----------------------------------------------------------


def test_x21_dim2_literal():
    m = interpret(node(XSpider(2, 2, 1))).matrix(1)
    close(m, [[1, 0, 0, 1], [0, 1, 1, 0]])


def test_x21_dim3_adds_mod_3():
    t = interpret(node(XSpider(3, 2, 1))).data
    for k in range(3):
        for l in range(3):
            col = t[:, k, l]
            assert col[(k + l) % 3] == 1 and col.sum() == 1


def test_mixed_z_spider_pads_with_zeros():
    close(interpret(node(ZSpider((3,), (2,), (1, 1)))).data, [[1, 0, 0], [0, 1, 0]])


def test_general_z_cap_shape():
    d = B.general_z_spider((), (3, 3), (1, 1, 1))
    close(d, np.eye(3))


def test_general_z_phase_free_identity():
    close(B.general_z_spider((2,), (2,), (1, 1)), np.eye(2))


def test_zw_spider_diag():
    close(node(ZWSpider(2, 1, 1, 1)), np.diag([1, 2]))
    close(node(ZWSpider(2, 2, 1, 1)), np.diag([1, 2, 4]))


def test_zw_spider_factorial_weights():
    # n + m - 2 = 1: entries r^k sqrt(k!)
    t = interpret(node(ZWSpider(1.5, 3, 1, 2))).data
    for k in range(4):
        assert t[k, k, k] == pytest.approx(1.5**k * math.sqrt(math.factorial(k)), abs=ATOL)


def test_w_node_literal():
    t = interpret(node(WNode(2, (1, 1)))).data
    expected = np.zeros((2, 2, 3))
    expected[0, 0, 0] = 1
    expected[0, 1, 1] = 1
    expected[1, 0, 1] = 1
    expected[1, 1, 2] = math.sqrt(2)
    close(t, expected)


def test_w_node_multinomial_squared():
    t = interpret(node(WNode(6, (2, 3, 1)))).data
    for idx in np.ndindex(3, 4, 2):
        k = sum(idx)
        if k <= 6:
            assert t[idx + (k,)] ** 2 == pytest.approx(oracles.multinomial(idx), abs=1e-9)
        assert np.count_nonzero(t[idx]) == (1 if k <= 6 else 0)


def test_w_node_drops_overflow():
    t = interpret(node(WNode(2, (2, 2)))).data
    assert t[2, 1].sum() == 0 and t[1, 2].sum() == 0 and t[2, 2].sum() == 0


def test_zw_ket():
    close(node(ZWKet(2, 2)), [0, 0, math.sqrt(2)])
    close(node(ZWKet(0, 2)), [0, 0, 0])
    close(node(ZWKet(3, 2)), [0, 0, 0])


# -- every generator at dims 2..4 against the loop oracles ---------------------


@pytest.mark.parametrize("a", DIMS)
def test_z_spider_oracle(a):
    rng = np.random.default_rng(a)
    for n, m in ((0, 1), (1, 1), (2, 1), (1, 2), (2, 2), (0, 3)):
        r = random_phase(rng, a)
        close(node(ZSpider((a,) * n, (a,) * m, r)), oracles.z_spider((a,) * n, (a,) * m, r))


@pytest.mark.parametrize("a", DIMS)
def test_mixed_z_spider_oracle(a):
    rng = np.random.default_rng(10 + a)
    for ins, outs in (((a,), (a + 1,)), ((a + 2, a), (a + 1,)), ((), (a, a + 1, a + 2))):
        r = random_phase(rng, min(ins + outs))
        close(node(ZSpider(ins, outs, r)), oracles.z_spider(ins, outs, r))


@pytest.mark.parametrize("a", DIMS)
def test_x_spider_oracle(a):
    for n in range(4):
        for m in range(4):
            if n + m <= 5:
                close(node(XSpider(a, n, m)), oracles.x_spider(a, n, m))


@pytest.mark.parametrize("a", DIMS)
def test_x_spider_builder_matches_primitive(a):
    for n, m in ((0, 0), (0, 1), (1, 0), (1, 1), (2, 1), (1, 2), (3, 1), (2, 2), (0, 2)):
        close(B.x_spider(a, n, m), oracles.x_spider(a, n, m))


@pytest.mark.parametrize("a", DIMS)
def test_x_spider_columns_sum_to_one(a):
    for n in (1, 2, 3):
        m = interpret(node(XSpider(a, n, 1))).matrix(1)
        np.testing.assert_array_equal(m.sum(axis=0), np.ones(a**n))
        assert set(np.unique(m.real)) <= {0.0, 1.0}


@pytest.mark.parametrize("a", DIMS)
def test_structural_generators(a):
    close(node(Identity(a)), np.eye(a))
    close(node(Cap(a)), np.eye(a))
    close(node(Cup(a)), np.eye(a))
    for b in DIMS:
        t = interpret(node(Swap(a, b))).data
        for i in range(a):
            for j in range(b):
                assert t[j, i, i, j] == 1
        assert np.count_nonzero(t) == a * b
        close(node(Embedding(a, b)), oracles.embedding(a, b))
    for j in range(a):
        close(node(BasisKet(j, a)), np.eye(a)[j])
    close(node(GlobalScalar(2 - 1j)), 2 - 1j)


@pytest.mark.parametrize("a", DIMS)
def test_zw_generators(a):
    lab = a - 1
    rng = np.random.default_rng(20 + a)
    for n, m in ((0, 1), (1, 1), (2, 1), (1, 2), (0, 0), (2, 2)):
        r = random_complex(rng)
        close(node(ZWSpider(r, lab, n, m)), oracles.zw_spider(r, lab, n, m))
    for smalls in ((lab,), (lab, lab), (1, lab), (lab, 1, 1)):
        big = max(sum(smalls), lab)
        close(node(WNode(big, smalls)), oracles.w_node(big, smalls))
        inv = np.moveaxis(oracles.w_node(big, smalls), -1, 0)
        close(node(WNode(big, smalls, inverted=True)), inv)
    close(node(WNode(lab, ())), np.eye(a)[0])
    for k in range(a + 1):
        close(node(ZWKet(k, lab)), oracles.zw_ket(k, lab))
    close(node(ZWIdentity(lab)), np.eye(a))
    close(node(ZWCap(lab)), np.eye(a))
    close(node(ZWCup(lab)), np.eye(a))
    swap = np.zeros((2, a, a, 2))
    for i in range(a):
        for j in range(2):
            swap[j, i, i, j] = 1
    close(node(ZWSwap(lab, 1)), swap)
    close(node(ZWScalar(0.5j)), 0.5j)


# -- derived ZX building blocks ------------------------------------------------


@pytest.mark.parametrize("d", DIMS)
def test_fourier_and_hadamard(d):
    w = np.exp(2j * np.pi / d)
    f = np.array([[w ** (j * k) for k in range(d)] for j in range(d)])
    close(interpret(B.fourier(d)).matrix(1), f)
    close(interpret(B.fourier(d, inverse=True)).matrix(1), f.conj())
    h = interpret(B.hadamard(d)).matrix(1)
    close(h @ interpret(B.hadamard(d, dagger=True)).matrix(1), np.eye(d))


@pytest.mark.parametrize("d", DIMS)
def test_dualizer_shift_k(d):
    dual = interpret(B.dualizer(d)).matrix(1)
    for x in range(d):
        assert dual[(-x) % d, x] == 1
    for j in range(d):
        shift = interpret(B.shift(j, d)).matrix(1)
        k = interpret(B.k_gate(j, d)).matrix(1)
        for x in range(d):
            assert shift[(x + j) % d, x] == 1
            assert k[(j - x) % d, x] == 1


@pytest.mark.parametrize("a", DIMS)
def test_zx_w_node_matches_zw(a):
    for big, smalls in ((a, (a - 1, 1)), (a + 1, (1, 1, 1)), (a - 1, (a - 1,))):
        want = oracles.w_node(big, smalls)
        close(B.zx_w_node(big, smalls), want)
        close(B.zx_w_node(big, smalls, inverted=True), np.moveaxis(want, -1, 0))
