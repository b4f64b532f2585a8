"""Standard interpretation of diagrams as dense complex tensors.

Tensor axes are ordered outputs first, then inputs, each left to right, and the
data is row-major.  Networks are contracted pairwise with ``np.tensordot``,
always picking the pair whose result is smallest; ties break on node order so
the result is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .diagram import Diagram, carried_dim, validate

DEFAULT_TOL = 1e-9
ENTRY_BUDGET = 2**24

EXACT = "exact"
UP_TO_SCALAR = "up-to-global-scalar"


class ResourceError(RuntimeError):
    """A contraction would exceed the entry budget."""


@dataclass(frozen=True)
class Tensor:
    shape: tuple[int, ...]
    data: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def of(cls, array) -> Tensor:
        array = np.asarray(array, dtype=np.complex128)
        return cls(tuple(array.shape), array)

    def flat(self) -> np.ndarray:
        return self.data.reshape(-1)

    def matrix(self, n_out: int) -> np.ndarray:
        """Reshape to (prod outputs) x (prod inputs)."""
        rows = int(np.prod(self.shape[:n_out], dtype=np.int64))
        return self.data.reshape(rows, -1)

    def to_json(self) -> dict:
        return {
            "shape": list(self.shape),
            "data": [[float(z.real), float(z.imag)] for z in self.flat()],
        }


@dataclass(frozen=True)
class EquivalenceVerdict:
    equal: bool
    max_abs_deviation: float
    mode: str = EXACT
    fitted_scalar: complex | None = None

    def __bool__(self) -> bool:
        return self.equal


# -- contraction ---------------------------------------------------------------


class _Piece:
    __slots__ = ("array", "labels")

    def __init__(self, array: np.ndarray, labels: list):
        self.array = array
        self.labels = labels


def _self_trace(piece: _Piece) -> _Piece:
    """Contract labels that occur twice on one tensor (self-loops)."""
    labels = piece.labels
    while len(set(labels)) < len(labels):
        seen = {}
        for ax, lab in enumerate(labels):
            if lab in seen:
                first = seen[lab]
                arr = np.trace(piece.array, axis1=first, axis2=ax)
                labels = [l for k, l in enumerate(labels) if k not in (first, ax)]
                piece = _Piece(arr, labels)
                break
            seen[lab] = ax
    return piece


def _budget(size: int) -> None:
    if size > ENTRY_BUDGET:
        raise ResourceError(
            f"contraction needs a tensor with {size} entries, over the budget of "
            f"{ENTRY_BUDGET}; try smaller dimensions or fewer boundary wires"
        )


def _contract_pair(a: _Piece, b: _Piece) -> _Piece:
    shared = [lab for lab in a.labels if lab in b.labels]
    ax_a = [a.labels.index(lab) for lab in shared]
    ax_b = [b.labels.index(lab) for lab in shared]
    arr = np.tensordot(a.array, b.array, axes=(ax_a, ax_b))
    labels = [l for l in a.labels if l not in shared] + [l for l in b.labels if l not in shared]
    return _Piece(arr, labels)


def _result_size(a: _Piece, b: _Piece) -> int:
    shared = set(a.labels) & set(b.labels)
    size = 1
    for p in (a, b):
        for lab, n in zip(p.labels, p.array.shape):
            if lab not in shared:
                size *= n
    return size


def _contract_network(pieces: list[_Piece], open_labels: list) -> np.ndarray:
    scalar = complex(1)
    live = []
    for p in pieces:
        p = _self_trace(p)
        if not p.labels:
            scalar *= complex(p.array)
        else:
            live.append(p)
    while len(live) > 1:
        best = None
        for i in range(len(live)):
            li = set(live[i].labels)
            for j in range(i + 1, len(live)):
                connected = bool(li.intersection(live[j].labels))
                key = (not connected, _result_size(live[i], live[j]), i, j)
                if best is None or key < best:
                    best = key
        _, size, i, j = best
        _budget(size)
        merged = _self_trace(_contract_pair(live[i], live[j]))
        live = [p for k, p in enumerate(live) if k not in (i, j)]
        if merged.labels:
            live.append(merged)
        else:
            scalar *= complex(merged.array)
    if not live:
        if open_labels:
            raise AssertionError("open labels remain but no tensors left")
        return np.asarray(scalar, dtype=np.complex128)
    final = live[0]
    perm = [final.labels.index(lab) for lab in open_labels]
    return scalar * np.transpose(final.array, perm)


def _network(d: Diagram, vectors: dict[int, np.ndarray] | None = None):
    """Node tensors labelled by wire; ``vectors`` caps chosen input slots."""
    vectors = vectors or {}
    calc = d.calculus
    label_of_src = {src: ("w", tgt) for tgt, src in d.wires.items()}
    pieces = []
    for nid in sorted(d.nodes):
        node = d.nodes[nid]
        arr = node.tensor()
        _budget(arr.size)
        labels = [label_of_src[(nid, p)] for p in range(len(node.outputs))]
        labels += [("w", (nid, q)) for q in range(len(node.inputs))]
        pieces.append(_Piece(arr, labels))

    out_labels = []
    for j, dim in enumerate(d.outputs):
        src = d.wires[("out", j)]
        if src[0] == "in":
            # bare wire from an input straight to an output
            n = carried_dim(calc, dim)
            pieces.append(_Piece(np.eye(n, dtype=np.complex128), [("o", j), ("w", ("out", j))]))
            out_labels.append(("o", j))
        else:
            out_labels.append(("w", ("out", j)))
    in_labels = []
    for i in range(len(d.inputs)):
        lab = label_of_src[("in", i)]
        if i in vectors:
            pieces.append(_Piece(np.asarray(vectors[i], dtype=np.complex128), [lab]))
        else:
            in_labels.append(lab)
    return pieces, out_labels + in_labels


def interpret(d: Diagram, check: bool = True) -> Tensor:
    """Dense tensor of ``d`` (outputs first, then inputs)."""
    if check:
        validate(d)
    shape = [carried_dim(d.calculus, x) for x in d.outputs + d.inputs]
    _budget(int(np.prod(shape, dtype=np.int64)))
    pieces, open_labels = _network(d)
    arr = _contract_network(pieces, open_labels)
    return Tensor(tuple(shape), arr.reshape(shape))


def apply_basis(d: Diagram, in_indices: Sequence[int]) -> Tensor:
    """Output-indexed tensor of ``d`` applied to the basis state ``|in_indices>``.

    The basis vectors are contracted into the network rather than slicing the
    full tensor, so this is an independent route to the same numbers.
    """
    validate(d)
    if len(in_indices) != len(d.inputs):
        raise ValueError(f"expected {len(d.inputs)} basis labels, got {len(in_indices)}")
    vectors = {}
    for i, (k, label) in enumerate(zip(in_indices, d.inputs)):
        n = carried_dim(d.calculus, label)
        if not 0 <= int(k) < n:
            raise ValueError(f"basis label {k} on input {i} is outside 0..{n - 1}")
        v = np.zeros(n, dtype=np.complex128)
        v[int(k)] = 1
        vectors[i] = v
    shape = [carried_dim(d.calculus, x) for x in d.outputs]
    pieces, open_labels = _network(d, vectors)
    arr = _contract_network(pieces, open_labels)
    return Tensor(tuple(shape), arr.reshape(shape))


# -- comparison ----------------------------------------------------------------


def tensor_equal(x, y, tol: float = DEFAULT_TOL, mode: str = EXACT) -> EquivalenceVerdict:
    """Compare two tensors relative to their magnitude.

    In exact mode the test is ``max|x - y| <= tol * max(1, max|x|, max|y|)``.
    In up-to-scalar mode the least-squares ``c`` with ``x ~ c y`` is fitted
    first and reported.
    """
    xa = x.data if isinstance(x, Tensor) else np.asarray(x, dtype=np.complex128)
    ya = y.data if isinstance(y, Tensor) else np.asarray(y, dtype=np.complex128)
    if xa.shape != ya.shape:
        raise ValueError(f"shape mismatch: {xa.shape} vs {ya.shape}")
    xf, yf = xa.reshape(-1), ya.reshape(-1)
    scale = max(1.0, float(np.abs(xf).max(initial=0)), float(np.abs(yf).max(initial=0)))
    if mode == EXACT:
        dev = float(np.abs(xf - yf).max(initial=0))
        return EquivalenceVerdict(dev <= tol * scale, dev, EXACT)
    if mode != UP_TO_SCALAR:
        raise ValueError(f"unknown comparison mode {mode!r}")
    yy = np.vdot(yf, yf).real
    c = complex(np.vdot(yf, xf) / yy) if yy > 0 else complex(1)
    dev = float(np.abs(xf - c * yf).max(initial=0))
    return EquivalenceVerdict(dev <= tol * scale, dev, UP_TO_SCALAR, c)


def diagrams_equal(a: Diagram, b: Diagram, tol: float = DEFAULT_TOL, mode: str = EXACT) -> EquivalenceVerdict:
    if (a.calculus, a.inputs, a.outputs) != (b.calculus, b.inputs, b.outputs):
        raise ValueError(
            f"signature mismatch: {a.calculus} {a.inputs}->{a.outputs} vs "
            f"{b.calculus} {b.inputs}->{b.outputs}"
        )
    return tensor_equal(interpret(a), interpret(b), tol, mode)
