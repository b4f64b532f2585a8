"""Batch checks: axiom soundness, derived-identity fixtures, translation preservation.

Every suite is a pure function of its arguments.  Random streams are keyed by
(seed, stable hash of the item name, trial), so adding a rule or a fixture does
not shift the draws of the others.
"""

from __future__ import annotations

import dataclasses
import math
import time
import zlib
from typing import Mapping, Sequence

import numpy as np

from ..diagram import (
    ZW,
    ZX,
    BasisKet,
    Cap,
    Cup,
    Diagram,
    Embedding,
    GlobalScalar,
    Identity,
    Node,
    Swap,
    XSpider,
    ZSpider,
    ZWScalar,
    ZWSpider,
    structural,
)
from ..report import CheckRecord, VerificationReport, jsonable
from ..rules.base import (
    RuleInstance,
    SideConditionError,
    catalog,
    check_instance,
    random_complex,
    random_phase,
)
from ..rules.rewrite import ReplayError, apply, find_sites, replay
from ..rules.base import instantiate
from ..semantics import DEFAULT_TOL, apply_basis, diagrams_equal, interpret, tensor_equal
from ..serialize import canonical_json, serialize
from ..translate import round_trip_zx, to_zw, to_zx
from .fixtures import A1_FIXTURES, hadamard_colour_script, sum_coefficients
from .random import RandomDiagramSpec, random_diagram, sample_basis

SUITE_DIMS = frozenset(range(2, 7))
PERTURBATION = 1e-3
MAX_REDRAWS = 1000


def _rng(seed: int, name: str, *extra: int) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode()), *extra])


def _check_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(sorted({int(d) for d in dims}))
    if not dims or not set(dims) <= SUITE_DIMS:
        raise ValueError(f"suite dims must be a non-empty subset of 2..6, got {list(dims)}")
    return dims


def _finish(report: VerificationReport, start: float) -> VerificationReport:
    report.duration = time.perf_counter() - start
    return report.sort()


# -- mutation ------------------------------------------------------------------


def perturb(d: Diagram, eps: float = PERTURBATION) -> Diagram:
    """Shift the first continuous parameter of ``d`` by ``eps``.

    Phase entry 0 is pinned to 1, so a Z-spider is perturbed at entry 1.  A
    diagram without continuous parameters gets an extra scalar 1 + eps.
    """
    for nid in sorted(d.nodes):
        n = d.nodes[nid]
        new: Node | None = None
        if isinstance(n, ZSpider) and len(n.phase) >= 2:
            phase = list(n.phase)
            phase[1] += eps
            new = dataclasses.replace(n, phase=tuple(phase))
        elif isinstance(n, ZWSpider):
            new = dataclasses.replace(n, r=n.r + eps)
        elif isinstance(n, (GlobalScalar, ZWScalar)):
            new = dataclasses.replace(n, value=n.value + eps)
        if new is not None:
            nodes = dict(d.nodes)
            nodes[nid] = new
            return Diagram(d.calculus, nodes, d.wires, d.inputs, d.outputs)
    return d @ Diagram.from_node(structural(d.calculus, "scalar")(1 + eps))


# -- axioms --------------------------------------------------------------------


def draw_instance(rule, rng: np.random.Generator, dims: Sequence[int]) -> tuple[RuleInstance, int]:
    """A random instance of ``rule``; side-condition violations are redrawn."""
    for redraws in range(MAX_REDRAWS):
        params = rule.sample(rng, dims)
        try:
            return instantiate(rule.name, params), redraws
        except SideConditionError:
            continue
    raise RuntimeError(f"{rule.name}: no admissible draw in {MAX_REDRAWS} attempts")


def run_axiom_suite(
    calculus: str,
    dims: Sequence[int] = (2, 3, 4),
    trials: int = 100,
    seed: int = 42,
    tol: float = DEFAULT_TOL,
    corrupt: str | None = None,
) -> VerificationReport:
    """``trials`` random instances of every catalog rule, both sides interpreted.

    ``corrupt`` names a rule whose right side is perturbed before checking; it
    is the mutation probe showing that the suite can fail.
    """
    start = time.perf_counter()
    dims = _check_dims(dims)
    rules = catalog(calculus)
    if corrupt is not None and corrupt not in {r.name for r in rules}:
        raise ValueError(f"unknown rule {corrupt!r} for {calculus}")
    report = VerificationReport(
        f"{calculus}-axioms",
        config={"calculus": calculus, "dims": list(dims), "trials": trials, "seed": seed, "tol": tol,
                "corrupt": corrupt},
    )
    for rule in rules:
        rng = _rng(seed, rule.name)
        for t in range(trials):
            inst, redraws = draw_instance(rule, rng, dims)
            if rule.name == corrupt:
                inst = dataclasses.replace(inst, rhs=perturb(inst.rhs))
            rec = check_instance(inst, tol, key=f"{rule.name}#{t}")
            rec.detail.update(seed=seed, trial=t)
            if redraws:
                rec.detail["redraws"] = redraws
            report.records.append(rec)
    return _finish(report, start)


# -- lemma suites --------------------------------------------------------------


def _pair_record(key: str, lhs: Diagram, rhs: Diagram, tol: float, detail: dict | None = None) -> CheckRecord:
    if lhs.signature != rhs.signature:
        return CheckRecord(key, False, math.inf, {"error": "signature mismatch", **(detail or {})}, "shape-mismatch")
    v = diagrams_equal(lhs, rhs, tol)
    detail = dict(detail or {})
    if not v.equal:
        detail.update(lhs=serialize(lhs), rhs=serialize(rhs))
    return CheckRecord(key, v.equal, v.max_abs_deviation, detail)


def _a1(dims, tol, seed, fixtures: Mapping) -> VerificationReport:
    report = VerificationReport("A1", config={"dims": list(dims), "seed": seed, "tol": tol})
    for name, fixture in fixtures.items():
        if fixture is None:
            report.untranscribed.append(name)
            continue
        for a in dims:
            for tag, lhs, rhs in fixture(a, _rng(seed, name, a)):
                key = f"{name}[d={a}]" + (f"[{tag}]" if tag else "")
                report.records.append(_pair_record(key, lhs, rhs, tol))
    for a in dims:
        start, script, target = hadamard_colour_script(a)
        key = f"hadamard-colour[d={a}][script]"
        try:
            final, log = replay(start, script, tol)
        except ReplayError as exc:
            report.records.append(CheckRecord(key, False, math.inf, {"error": str(exc)}, "replay-error"))
            continue
        report.records.append(_pair_record(key, final, target, tol, {"steps": [s.to_json() for s in script]}))
    return report


def a2_generators(dims: Sequence[int], seed: int = 0) -> list[tuple[str, str, Node]]:
    """(family, key, node) for every ZX generator family at ``dims``."""
    out = []
    for a in dims:
        rng = _rng(seed, "z_spider", a)
        out.append(("z_spider", f"z_spider[{a}->{a}]", ZSpider((a,), (a,), random_phase(rng, a))))
        out.append(("z_spider", f"z_spider[{a}{a}->{a}]", ZSpider((a, a), (a,), random_phase(rng, a))))
        out.append(("z_spider", f"z_spider[->{a}]", ZSpider((), (a,), random_phase(rng, a))))
        for b in dims:
            if b != a:
                m = min(a, b)
                out.append(("z_spider", f"z_spider[{a}->{b}]", ZSpider((a,), (b,), random_phase(rng, m))))
        for n, m in ((2, 1), (1, 2), (1, 1), (0, 1), (1, 0), (0, 2), (2, 0)):
            out.append(("x_spider", f"x_spider[{a}][{n}->{m}]", XSpider(a, n, m)))
        for b in dims:
            if b != a:
                out.append(("embedding", f"embedding[{a}->{b}]", Embedding(a, b)))
        for j in range(a):
            out.append(("basis_ket", f"basis_ket[{j}/{a}]", BasisKet(j, a)))
        out.append(("identity", f"identity[{a}]", Identity(a)))
        for b in dims:
            out.append(("swap", f"swap[{a},{b}]", Swap(a, b)))
        out.append(("cap_cup", f"cap[{a}]", Cap(a)))
        out.append(("cap_cup", f"cup[{a}]", Cup(a)))
    rng = _rng(seed, "scalar")
    out.append(("scalar", "scalar", GlobalScalar(random_complex(rng))))
    return out


def _a2(dims, tol, seed) -> VerificationReport:
    report = VerificationReport("A2", config={"dims": list(dims), "seed": seed, "tol": tol})
    for family, key, node in a2_generators(dims, seed):
        d = Diagram.from_node(node)
        rt = round_trip_zx(d, tol)
        detail = {"family": family}
        status = ""
        if rt.structural is not None:
            detail["structural"] = rt.structural
            if not rt.structural:
                status = "structural-mismatch"
        if not rt.semantic.equal:
            detail.update(source=serialize(d), image=serialize(rt.image))
        report.records.append(CheckRecord(key, rt.ok, rt.semantic.max_abs_deviation, detail, status))
    return report


def _a3(dims, tol, seed, trials) -> VerificationReport:
    report = VerificationReport("A3", config={"dims": list(dims), "seed": seed, "tol": tol, "trials": trials})
    for rule in catalog(ZW):
        rng = _rng(seed, rule.name)
        for t in range(trials):
            inst, _ = draw_instance(rule, rng, dims)
            lhs, rhs = to_zx(inst.lhs).target, to_zx(inst.rhs).target
            rec = _pair_record(f"{rule.name}#{t}", lhs, rhs, tol, {"rule": rule.name})
            if not rec.passed:
                rec.detail["params"] = jsonable(inst.params)
            report.records.append(rec)
    labels = sorted({d - 1 for d in dims})
    # Z-ID: its ZX image is a phase-free 1->1 spider, removed by one S2 step
    for a in labels:
        inst = instantiate("Z-ID", {"a": a})
        host, target = to_zx(inst.lhs).target, to_zx(inst.rhs).target
        s2 = instantiate("S2", {"a": a + 1})
        key = f"Z-ID[{a}][S2]"
        sites = find_sites(host, s2.lhs, limit=1)
        if not sites:
            report.records.append(CheckRecord(key, False, math.inf, {"error": "no S2 site"}, "replay-error"))
            continue
        out = apply(host, sites[0], s2)
        rec = _pair_record(key, out, target, tol, {"derivation": ["S2"]})
        same = canonical_json(out) == canonical_json(target)
        rec.detail["structural"] = same
        rec.passed = rec.passed and same
        report.records.append(rec)
    # W-SUM: both sides carry coefficients c_k = (r+s)^k / k! after the sqrt(k!) weights
    for a in labels:
        rng = _rng(seed, "W-SUM-coefficients", a)
        for r, s in ((1.0, 1.0), (random_complex(rng), random_complex(rng))):
            inst = instantiate("W-SUM", {"a": a, "r": r, "s": s})
            want = sum_coefficients(a, r, s)
            weights = np.array([math.sqrt(math.factorial(k)) for k in range(a + 1)])
            for side, d in (("lhs", inst.lhs), ("rhs", inst.rhs)):
                got = interpret(to_zx(d).target).data / weights
                v = tensor_equal(got, want, tol)
                key = f"W-SUM[{a}][c_k][{side}][r={_short(r)},s={_short(s)}]"
                report.records.append(CheckRecord(key, v.equal, v.max_abs_deviation, {}))
    return report


def _short(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.3g}{z.imag:+.3g}j"


def run_lemma_suite(
    which: str,
    dims: Sequence[int] = (2, 3, 4),
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    trials: int = 100,
    fixtures: Mapping | None = None,
) -> VerificationReport:
    """The A suites: A1 derived-identity fixtures, A2 round trips, A3 ZX images of ZW rules."""
    begin = time.perf_counter()
    dims = _check_dims(dims)
    which = which.upper()
    if which == "A1":
        report = _a1(dims, tol, seed, A1_FIXTURES if fixtures is None else fixtures)
    elif which == "A2":
        report = _a2(dims, tol, seed)
    elif which == "A3":
        report = _a3(dims, tol, seed, trials)
    else:
        raise ValueError(f"unknown lemma suite {which!r}; expected A1, A2 or A3")
    return _finish(report, begin)


# -- translations --------------------------------------------------------------

DIRECTIONS = {"xw": ZX, "wx": ZW}


def run_translation_suite(
    direction: str,
    spec: RandomDiagramSpec,
    tol: float = DEFAULT_TOL,
    count: int = 200,
    samples: int = 3,
    offset: int = 1,
) -> VerificationReport:
    """Draw ``count`` diagrams and compare each with its translation.

    Both the full tensors and ``samples`` basis-state applications are checked.
    ``offset`` is the ZX->ZW object shift; anything but 1 is a negative control.
    """
    begin = time.perf_counter()
    direction = direction.lower()
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be 'xw' or 'wx', got {direction!r}")
    if spec.calculus != DIRECTIONS[direction]:
        spec = dataclasses.replace(spec, calculus=DIRECTIONS[direction])
    config = {"direction": direction, "count": count, "samples": samples, "tol": tol,
              **{f.name: getattr(spec, f.name) for f in dataclasses.fields(spec)}}
    if offset != 1:
        config["offset"] = offset
    report = VerificationReport(f"translate-{direction}", config=config)
    for i in range(count):
        rng = np.random.default_rng([spec.seed, i])
        d = random_diagram(spec, rng)
        key = f"diagram#{i}"
        try:
            target = to_zw(d, offset).target if direction == "xw" else to_zx(d).target
        except (ValueError, TypeError) as exc:
            report.records.append(CheckRecord(key, False, math.inf, {"error": str(exc), "diagram": serialize(d)}, "error"))
            continue
        src, dst = interpret(d), interpret(target)
        if src.shape != dst.shape:
            report.records.append(CheckRecord(
                key, False, math.inf,
                {"source_shape": list(src.shape), "target_shape": list(dst.shape)}, "shape-mismatch",
            ))
            continue
        full = tensor_equal(src.data, dst.data, tol)
        worst, ok = full.max_abs_deviation, full.equal
        basis = sample_basis(rng, d, samples) if d.inputs else []
        for idx in basis:
            v = tensor_equal(apply_basis(d, idx).data, apply_basis(target, idx).data, tol)
            worst, ok = max(worst, v.max_abs_deviation), ok and v.equal
        detail = {"generators": len(d.nodes), "basis_samples": [list(b) for b in basis]}
        if not ok:
            detail["diagram"] = serialize(d)
        report.records.append(CheckRecord(key, ok, worst, detail))
    return _finish(report, begin)
