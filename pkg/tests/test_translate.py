import math

import numpy as np
import pytest

import oracles
from fdzx import (
    ZW,
    ZX,
    Cap,
    Cup,
    Diagram,
    Embedding,
    Identity,
    Swap,
    WNode,
    XSpider,
    ZSpider,
    ZWCap,
    ZWSpider,
    diagrams_equal,
    interpret,
    round_trip_zx,
    to_zw,
    to_zx,
    translate,
)
from fdzx import builders as B
from fdzx.translate import mod_gadget, normal_form_roots, zw_diag, zw_state


def node(n):
    return Diagram.from_node(n)


def test_identity_label():
    img = to_zw(node(Identity(3))).target
    assert img.calculus == ZW
    assert img.signature == ((2,), (2,))
    (n,) = img.nodes.values()
    assert n.kind == "zw_identity" and n.dim == 2


def test_swap_labels():
    img = to_zw(node(Swap(2, 3))).target
    assert img.signature == ((1, 2), (2, 1))
    np.testing.assert_allclose(interpret(img).data, interpret(node(Swap(2, 3))).data)


def test_x21_image():
    img = to_zw(node(XSpider(2, 2, 1))).target
    np.testing.assert_allclose(interpret(img).matrix(1), [[1, 0, 0, 1], [0, 1, 1, 0]], atol=1e-12)


def test_mod_gadget_two():
    np.testing.assert_allclose(interpret(mod_gadget(2)).matrix(1), [[1, 0, 1, 0], [0, 1, 0, 1]], atol=1e-12)


@pytest.mark.parametrize("a", (2, 3, 4, 5))
def test_mod_gadget_oracle(a):
    np.testing.assert_allclose(interpret(mod_gadget(a)).matrix(1), oracles.mod_matrix(a), atol=1e-10)


def test_mod_gadget_on_four():
    v = interpret(mod_gadget(3)).matrix(1) @ np.eye(6)[4]
    np.testing.assert_allclose(v, [0, 1, 0], atol=1e-12)


def test_wx_cap():
    img = to_zx(node(ZWCap(2))).target
    (n,) = img.nodes.values()
    assert n == Cap(3)


def test_wx_w_node():
    img = to_zx(node(WNode(2, (1, 1)))).target
    t = interpret(img).data
    assert t[1, 1, 2] == pytest.approx(math.sqrt(2))
    np.testing.assert_allclose(t, oracles.w_node(2, (1, 1)), atol=1e-12)


def test_wx_zw_spider():
    img = to_zx(node(ZWSpider(2, 1, 1, 1))).target
    np.testing.assert_allclose(interpret(img).data, np.diag([1, 2]), atol=1e-12)


def test_translate_dispatch():
    with pytest.raises(ValueError, match="already"):
        translate(node(Identity(2)), ZX)
    with pytest.raises(ValueError):
        to_zx(node(Identity(2)))
    assert translate(node(Identity(2)), ZW).target.calculus == ZW


def test_provenance_covers_every_node():
    d = B.fourier(3) >> B.x_spider(3, 1, 2)
    trace = to_zw(d)
    assert set(trace.provenance) == set(d.nodes)
    covered = [i for ids in trace.provenance.values() for i in ids]
    assert sorted(covered) == sorted(trace.target.nodes)
    assert trace.to_json()["target_calculus"] == ZW


@pytest.mark.parametrize("gen", [Identity(3), Swap(2, 3), Cap(4), Cup(2)])
def test_round_trip_structural(gen):
    rt = round_trip_zx(node(gen))
    assert rt.ok and rt.structural is True


@pytest.mark.parametrize(
    "gen",
    [Embedding(3, 2), Embedding(2, 4), XSpider(3, 2, 1), ZSpider((2,), (3, 4), (1, 2j)), XSpider(2, 0, 2)],
)
def test_round_trip_semantic(gen):
    rt = round_trip_zx(node(gen))
    assert rt.semantic.equal and rt.structural is None


def test_wrong_offset_breaks_shapes():
    rt = round_trip_zx(node(XSpider(3, 1, 1)), offset=0)
    assert not rt.ok


def test_normal_form_roots():
    rng = np.random.default_rng(0)
    for label in (1, 2, 3, 5):
        values = np.concatenate([[1], rng.normal(size=label) + 1j * rng.normal(size=label)])
        c = normal_form_roots(values)
        # elementary symmetric polynomials of c, weighted by sqrt(i!)
        e = np.poly(-c)
        got = [math.sqrt(math.factorial(i)) * e[i] for i in range(label + 1)]
        np.testing.assert_allclose(got, values, atol=1e-9)


def test_normal_form_with_zero_roots():
    np.testing.assert_allclose(interpret(zw_state(3, [1, 0, 0, 0])).data, [1, 0, 0, 0], atol=1e-12)


def test_zw_diag():
    f = [1, 2j, -1, 0.5]
    np.testing.assert_allclose(interpret(zw_diag(3, f)).data, np.diag(f), atol=1e-12)


def test_translations_compose():
    d = B.z(1, 2, 3, (1, 1j, -1)) >> (B.fourier(3) @ B.embed(3, 2))
    np.testing.assert_allclose(interpret(to_zw(d).target).data, interpret(d).data, atol=1e-12)
    assert diagrams_equal(to_zx(to_zw(d).target).target, d)
