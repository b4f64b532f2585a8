"""Invariants checked on generated inputs."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fdzx import Diagram, WNode, ZSpider, interpret, transpose
from fdzx import builders as B
from fdzx.rules import convolve_phase_vectors, instantiate, solve_pc
from fdzx.serialize import canonical_json, deserialize, serialize
from fdzx.verify import RandomDiagramSpec, random_diagram

dims = st.integers(2, 4)
small = st.floats(-2, 2, allow_nan=False)
cplx = st.builds(complex, small, small)


def phase(a):
    return st.lists(cplx, min_size=a - 1, max_size=a - 1).map(lambda t: (1 + 0j, *t))


@st.composite
def zx_diagrams(draw, max_width=4):
    spec = RandomDiagramSpec(
        max_generators=draw(st.integers(1, 5)), max_width=max_width, seed=draw(st.integers(0, 10**6))
    )
    return random_diagram(spec)


@settings(max_examples=40, deadline=None)
@given(zx_diagrams())
def test_sequential_composition_is_matrix_product(d):
    # d ; transpose(d) always composes and is d^T d
    if not d.outputs:
        return
    td = interpret(transpose(d)).matrix(len(d.inputs))
    md = interpret(d).matrix(len(d.outputs))
    np.testing.assert_allclose(interpret(d >> transpose(d)).matrix(len(d.inputs)), td @ md, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(zx_diagrams(max_width=2), zx_diagrams(max_width=2))
def test_parallel_composition_is_kron(d, e):
    m = interpret(d @ e).matrix(len(d.outputs) + len(e.outputs))
    want = np.kron(interpret(d).matrix(len(d.outputs)), interpret(e).matrix(len(e.outputs)))
    np.testing.assert_allclose(m, want, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(zx_diagrams())
def test_transpose_involution(d):
    np.testing.assert_allclose(interpret(transpose(transpose(d))).data, interpret(d).data, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(zx_diagrams())
def test_serialize_round_trip(d):
    assert canonical_json(deserialize(serialize(d))) == canonical_json(d)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_s1_matches_oracle(data):
    a = data.draw(dims)
    c = data.draw(dims)
    n = min(a, c)
    p, q = data.draw(phase(n)), data.draw(phase(min(c, a)))
    inst = instantiate("S1", {"in1": (a,), "out1": (), "in2": (), "out2": (a,), "c": c, "p": p, "q": q})
    expected = oracles.z_spider((a,), (a,), [p[k] * q[k] if k < n else 0 for k in range(a)])
    np.testing.assert_allclose(interpret(inst.rhs).data, expected, atol=1e-12)
    np.testing.assert_allclose(interpret(inst.lhs).data, expected, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_convolution_oracle(data):
    a = data.draw(dims)
    p, q = data.draw(phase(a)), data.draw(phase(a))
    r = convolve_phase_vectors(p, q, a)
    # X(2->1) on two Z-states is the sum of |i + j mod a> weighted p_i q_j
    v = interpret((B.z_state(a, p) @ B.z_state(a, q)) >> B.x_spider(a, 2, 1)).data
    np.testing.assert_allclose(v, r, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_solve_pc_satisfies_constraints(data):
    a = data.draw(dims)
    b, c = data.draw(st.integers(1, a)), data.draw(st.integers(1, a))
    k = data.draw(st.integers(0, a - 1))
    p = tuple(np.exp(2j * np.pi * k * i / a) for i in range(a))
    q = solve_pc(p, a, b, c)
    assert q is not None
    for i in range(b):
        for j in range(c):
            assert abs(q[(i + j) % a] - p[i] * p[j]) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.integers(0, 2))
def test_w_node_entries(smalls, extra):
    big = sum(smalls) + extra
    t = interpret(Diagram.from_node(WNode(big, tuple(smalls)))).data
    for idx in np.ndindex(*t.shape[:-1]):
        assert abs(t[idx + (sum(idx),)] - math.sqrt(oracles.multinomial(idx))) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_mixed_spider_support(data):
    ins = tuple(data.draw(st.lists(dims, max_size=2)))
    outs = tuple(data.draw(st.lists(dims, min_size=1, max_size=2)))
    r = data.draw(phase(min(ins + outs)))
    t = interpret(Diagram.from_node(ZSpider(ins, outs, r))).data
    assert np.count_nonzero(t) == sum(1 for x in r if x != 0)
