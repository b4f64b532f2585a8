import math

import numpy as np
import pytest

from fdzx import (
    Diagram,
    GlobalScalar,
    Identity,
    ResourceError,
    WNode,
    XSpider,
    ZSpider,
    apply_basis,
    interpret,
    tensor_equal,
)
from fdzx import builders as B
from fdzx import semantics
from fdzx.semantics import UP_TO_SCALAR, Tensor


def node(n):
    return Diagram.from_node(n)


def test_z_spider_diag():
    np.testing.assert_allclose(interpret(node(ZSpider((3,), (3,), (1, 1j, -1)))).data, np.diag([1, 1j, -1]))


def test_scalar_action():
    d = B.x_spider(3, 2, 1)
    scaled = node(GlobalScalar(3 + 1j)) @ d
    np.testing.assert_allclose(interpret(scaled).data, (3 + 1j) * interpret(d).data)


def test_layout_outputs_first():
    d = node(ZSpider((2,), (3,), (1, 5)))
    t = interpret(d)
    assert t.shape == (3, 2)
    assert t.data[1, 1] == 5
    assert t.matrix(1).shape == (3, 2)


def test_apply_basis_x():
    v = apply_basis(B.x_spider(3, 2, 1), (1, 2))
    np.testing.assert_allclose(v.data, [1, 0, 0])


def test_apply_basis_identity():
    np.testing.assert_allclose(apply_basis(node(Identity(4)), (3,)).data, [0, 0, 0, 1])


def test_apply_basis_w_node():
    v = apply_basis(node(WNode(2, (1, 1))), (2,)).data
    expected = np.zeros((2, 2))
    expected[1, 1] = math.sqrt(2)
    np.testing.assert_allclose(v, expected)


def test_apply_basis_out_of_range():
    with pytest.raises(ValueError, match="outside 0..3"):
        apply_basis(node(Identity(4)), (4,))
    with pytest.raises(ValueError, match="expected 1 basis labels"):
        apply_basis(node(Identity(4)), (0, 0))


def test_apply_basis_matches_slice():
    d = B.fourier(3) >> B.z(1, 2, 3, (1, 2, 3j))
    full = interpret(d).data
    for k in range(3):
        np.testing.assert_allclose(apply_basis(d, (k,)).data, full[..., k], atol=1e-12)


def test_tensor_equal_self():
    x = np.arange(6.0).reshape(2, 3)
    v = tensor_equal(x, x)
    assert v.equal and v.max_abs_deviation == 0


def test_tensor_equal_up_to_scalar():
    v = tensor_equal(np.diag([1, 2]), np.diag([2, 4]), mode=UP_TO_SCALAR)
    assert v.equal and v.fitted_scalar == pytest.approx(0.5)


def test_tensor_equal_reports_deviation():
    v = tensor_equal(np.diag([1, 2]), np.diag([1, 2.1]), tol=1e-9)
    assert not v.equal
    assert v.max_abs_deviation == pytest.approx(0.1)


def test_tensor_equal_relative_scale():
    big = np.array([1e6, 0])
    assert tensor_equal(big, big + [1e-4, 0], tol=1e-9)
    assert not tensor_equal(big, big + [1e-2, 0], tol=1e-9)


def test_tensor_equal_shape_mismatch():
    with pytest.raises(ValueError, match="shape mismatch"):
        tensor_equal(np.zeros(2), np.zeros(3))


def test_budget(monkeypatch):
    monkeypatch.setattr(semantics, "ENTRY_BUDGET", 100)
    with pytest.raises(ResourceError, match="smaller dimensions"):
        interpret(node(XSpider(4, 2, 2)))


def test_self_loop_trace():
    # Z-spider 1->1 whose output feeds its own input: trace of diag(r)
    d = Diagram(ZSpider.calculus, {0: ZSpider((3,), (3,), (1, 2, 3))}, {(0, 0): (0, 0)}, [], [])
    assert interpret(d).data == pytest.approx(6)


def test_functoriality_matrix_product():
    a = B.fourier(3)
    b = B.z(1, 1, 3, (1, 1j, -2)) >> B.shift(1, 3)
    lhs = interpret(a >> b).matrix(1)
    rhs = interpret(b).matrix(1) @ interpret(a).matrix(1)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_tensor_json():
    t = Tensor.of(np.array([1 + 2j, 0]))
    assert t.to_json() == {"shape": [2], "data": [[1.0, 2.0], [0.0, 0.0]]}


def test_contraction_deterministic():
    d = B.hadamard(4) >> B.x_spider(4, 1, 2)
    a, b = interpret(d).data, interpret(d).data
    assert a.tobytes() == b.tobytes()
