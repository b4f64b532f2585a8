import numpy as np
import pytest

from fdzx import (
    ZW,
    ZX,
    BasisKet,
    Builder,
    Cap,
    CompositionError,
    Cup,
    Diagram,
    GlobalScalar,
    Identity,
    ValidationError,
    WNode,
    XSpider,
    ZSpider,
    ZWSpider,
    canonical,
    compose_par,
    diagrams_equal,
    interpret,
    transpose,
    validate,
)
from fdzx import builders as B
from fdzx.diagram import Box, carried_dim, permutation, structurally_equal, substitute


def node(n):
    return Diagram.from_node(n)


def test_identity_composed_with_itself():
    d = node(Identity(3)) >> node(Identity(3))
    assert d.signature == ((3,), (3,))
    np.testing.assert_allclose(interpret(d).data, np.eye(3))


def test_cap_then_cup_is_dimension():
    d = node(Cap(2)) >> node(Cup(2))
    assert d.signature == ((), ())
    assert interpret(d).data == pytest.approx(2)


def test_mismatch_names_first_slot():
    top = node(ZSpider((2,), (2, 3), (1, 1)))
    bottom = node(ZSpider((3, 2), (2,), (1, 1)))
    with pytest.raises(CompositionError, match="slot 0"):
        top >> bottom


def test_arity_mismatch():
    with pytest.raises(CompositionError, match="2 outputs but bottom has 1 inputs"):
        node(Cap(2)) >> node(Identity(2))


def test_calculus_mismatch():
    with pytest.raises(CompositionError):
        node(Identity(2)) @ node(ZWSpider(1, 1, 1, 1))


def test_parallel_signature():
    d = node(Identity(2)) @ node(Identity(3))
    assert d.signature == ((2, 3), (2, 3))


def test_scalar_tensor_scales():
    base = B.z(1, 2, 3, (1, 2j, -1))
    scaled = node(GlobalScalar(0.5 - 2j)) @ base
    np.testing.assert_allclose(interpret(scaled).data, (0.5 - 2j) * interpret(base).data)


def test_empty_is_tensor_unit():
    d = B.z(1, 2, 3, (1, 2, 3))
    assert structurally_equal(Diagram.empty(ZX) @ d, d)
    assert structurally_equal(d @ Diagram.empty(ZX), d)


def test_transpose_of_ket_is_bra():
    t = transpose(node(BasisKet(2, 4)))
    assert t.signature == ((4,), ())
    np.testing.assert_allclose(interpret(t).data, np.eye(4)[2])


def test_transpose_identity():
    assert diagrams_equal(transpose(node(Identity(3))), node(Identity(3)))


def test_transpose_x21():
    t = interpret(transpose(node(XSpider(3, 2, 1)))).data
    assert t.shape == (3, 3, 3)
    for k in range(3):
        for l in range(3):
            for j in range(3):
                assert t[k, l, j] == (1 if (k + l - j) % 3 == 0 else 0)


def test_transpose_matches_index_permutation():
    d = node(ZSpider((2, 3), (4,), (1, 2)))
    t = interpret(transpose(d)).data
    np.testing.assert_allclose(t, np.transpose(interpret(d).data, (1, 2, 0)))


@pytest.mark.parametrize("a", (2, 3, 4))
def test_snake(a):
    d = (node(Cap(a)) @ node(Identity(a))) >> (node(Identity(a)) @ node(Cup(a)))
    np.testing.assert_allclose(interpret(d).data, np.eye(a))


def test_validate_cap_signature():
    assert validate(node(Cap(3))) == ((), (3, 3))


def test_validate_dimension_mismatch():
    nodes = {0: ZSpider((2,), (2,), (1, 1)), 1: ZSpider((3,), (3,), (1, 1, 1))}
    wires = {(0, 0): ("in", 0), (1, 0): (0, 0), ("out", 0): (1, 0)}
    with pytest.raises(ValidationError, match="dimension mismatch"):
        Diagram(ZX, nodes, wires, [2], [3])


def test_validate_mixed_calculus():
    nodes = {0: WNode(1, (1,))}
    wires = {(0, 0): ("in", 0), ("out", 0): (0, 0)}
    with pytest.raises(ValidationError, match="node 0: w_node belongs to zw"):
        Diagram(ZX, nodes, wires, [2], [2])


def test_validate_dangling_port():
    with pytest.raises(ValidationError, match="dangling node 0 input port 1"):
        Diagram(ZX, {0: XSpider(2, 2, 1)}, {(0, 0): ("in", 0), ("out", 0): (0, 0)}, [2], [2])


def test_dimension_one_rejected():
    with pytest.raises(ValidationError):
        Identity(1)
    with pytest.raises(ValidationError, match="input slot 0"):
        Diagram(ZX, {}, {("out", 0): ("in", 0)}, [1], [1])


def test_phase_must_start_with_one():
    with pytest.raises(ValidationError):
        ZSpider((2,), (2,), (2, 1))
    with pytest.raises(ValidationError, match="minimal leg dimension"):
        ZSpider((3,), (2,), (1, 1, 1))


def test_builder():
    b = Builder(ZX, inputs=[3])
    s = b.add(ZSpider((3,), (3, 3), (1, 1, 1)))
    b.connect(b.input(0), (s, 0))
    b.output((s, 0))
    b.output((s, 1))
    d = b.build()
    assert d.signature == ((3,), (3, 3))
    with pytest.raises(ValidationError):
        b.connect(b.input(0), (s, 0))


def test_permutation():
    p = permutation(ZX, (2, 3, 4), (2, 0, 1))
    assert p.outputs == (4, 2, 3)
    t = interpret(p).data
    assert t[3, 1, 2, 1, 2, 3] == 1 and np.count_nonzero(t) == 24
    with pytest.raises(CompositionError):
        permutation(ZX, (2, 3), (0, 0))


def test_canonical_ignores_ids():
    d = B.z(1, 1, 3, (1, 2, 3)) >> B.z(1, 2, 3, (1, 1j, 2))
    shifted = d.relabel(17)
    assert d != shifted
    assert canonical(d) == canonical(shifted)


def test_substitute_closed_loop_counts_dimension():
    # both identities become bare wires; the cap and cup then close a trace
    d = node(Cap(3)) >> (node(Identity(3)) @ node(Identity(3))) >> node(Cup(3))
    out, prov = substitute(d, {1: Diagram.wire(ZX, [3]), 2: Diagram.wire(ZX, [3])})
    assert interpret(out).data == pytest.approx(3)
    assert prov[1] == [] and prov[2] == []


def test_carried_dim():
    assert carried_dim(ZX, 3) == 3
    assert carried_dim(ZW, 3) == 4


def test_box_is_not_a_generator():
    box = Box(ZX, (2,), (2,))
    with pytest.raises(ValidationError):
        Diagram(ZX, {0: box}, {(0, 0): ("in", 0), ("out", 0): (0, 0)}, [2], [2])


def test_compose_par_keeps_order():
    d = compose_par(node(BasisKet(1, 2)), node(BasisKet(2, 3)))
    t = interpret(d).data
    assert t.shape == (2, 3) and t[1, 2] == 1
