"""fdzx command line: eval, equal, translate, verify, apply.

Exit codes: 0 success or pass, 1 a semantic check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .diagram import ZW, ZX, DiagramError
from .report import jsonable
from .rules.rewrite import ReplayError, load_script, replay
from .semantics import DEFAULT_TOL, EXACT, UP_TO_SCALAR, ResourceError, apply_basis, diagrams_equal, interpret
from .serialize import deserialize, serialize
from .translate import translate
from .verify.random import RandomDiagramSpec
from .verify.suites import run_axiom_suite, run_lemma_suite, run_translation_suite

OK, FAILED, USAGE = 0, 1, 2

SUITES = ("zx-axioms", "zw-axioms", "a1", "a2", "a3", "translate-xw", "translate-wx")


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def fmt_complex(z: complex) -> str:
    z = complex(z)
    return f"{fmt(z.real)}{'+' if z.imag >= 0 or np.isnan(z.imag) else '-'}{fmt(abs(z.imag))}j"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n")


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of integers, got {text!r}") from None


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# -- commands ------------------------------------------------------------------


def cmd_eval(args) -> int:
    d = deserialize(_read(args.file))
    if args.basis is not None:
        t = apply_basis(d, _ints(args.basis, "--basis"))
    else:
        t = interpret(d)
    if args.json:
        _write(_dump_json(t.to_json()), None)
        return OK
    lines = [f"shape {list(t.shape)}"]
    for idx in np.ndindex(*t.shape):
        lines.append(f"{list(idx)} {fmt_complex(t.data[idx])}")
    _write("\n".join(lines), None)
    return OK


def cmd_equal(args) -> int:
    a = deserialize(_read(args.file1))
    b = deserialize(_read(args.file2))
    if a.signature != b.signature:
        raise UsageError(
            f"signature mismatch: {a.calculus} {list(a.inputs)}->{list(a.outputs)} vs "
            f"{b.calculus} {list(b.inputs)}->{list(b.outputs)}"
        )
    v = diagrams_equal(a, b, args.tol, UP_TO_SCALAR if args.up_to_scalar else EXACT)
    if args.json:
        out = {"equal": v.equal, "mode": v.mode, "max_abs_deviation": v.max_abs_deviation, "tol": args.tol}
        if v.fitted_scalar is not None:
            out["scalar"] = jsonable(v.fitted_scalar)
        _write(_dump_json(out), None)
    else:
        lines = [f"equal {str(v.equal).lower()}", f"mode {v.mode}", f"deviation {fmt(v.max_abs_deviation)}"]
        if v.fitted_scalar is not None:
            lines.append(f"scalar {fmt_complex(v.fitted_scalar)}")
        _write("\n".join(lines), None)
    return OK if v.equal else FAILED


def cmd_translate(args) -> int:
    d = deserialize(_read(args.file))
    if d.calculus == args.to:
        raise UsageError(f"diagram is already {args.to}; nothing to translate")
    trace = translate(d, args.to)
    _write(serialize(trace.target), args.output)
    if args.provenance:
        text = _dump_json(trace.to_json())
        if args.output and args.output != "-":
            _write(text, str(Path(args.output).with_suffix(".provenance.json")))
        else:
            sys.stderr.write(text + "\n")
    return OK


def _run_suite(args):
    dims = tuple(_ints(args.dims, "--dims"))
    if args.suite in ("zx-axioms", "zw-axioms"):
        calc = ZX if args.suite == "zx-axioms" else ZW
        return run_axiom_suite(calc, dims, args.trials, args.seed, args.tol, corrupt=args.corrupt)
    if args.corrupt is not None:
        raise UsageError("--corrupt only applies to the axiom suites")
    if args.suite in ("a1", "a2", "a3"):
        return run_lemma_suite(args.suite.upper(), dims, args.tol, seed=args.seed, trials=args.trials)
    direction = args.suite.split("-")[1]
    spec = RandomDiagramSpec(
        ZX if direction == "xw" else ZW,
        max_generators=args.max_generators,
        dims=dims,
        max_width=args.max_width,
        seed=args.seed,
    )
    return run_translation_suite(direction, spec, args.tol, count=args.count, offset=args.offset)


def cmd_verify(args) -> int:
    report = _run_suite(args)
    if args.json:
        _write(report.dumps(timing=not args.no_timing), None)
    else:
        _write(report.table(), None)
    if report.untranscribed and not args.allow_untranscribed:
        sys.stderr.write("untranscribed: " + ", ".join(report.untranscribed) + "\n")
        return FAILED
    return OK if report.ok else FAILED


def cmd_apply(args) -> int:
    d = deserialize(_read(args.file))
    script = load_script(_read(args.script))
    try:
        final, log = replay(d, script, args.tol)
    except ReplayError as exc:
        _write_log(exc.log, args.log)
        sys.stderr.write(f"error: {exc}\n")
        return FAILED if exc.semantic else USAGE
    _write(serialize(final), args.output)
    _write_log(log, args.log)
    return OK


def _write_log(log: list[dict], path: str | None) -> None:
    text = _dump_json(jsonable(log))
    if path:
        _write(text, path)
    else:
        sys.stderr.write(text + "\n")


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fdzx", description="Finite-dimensional ZX and ZW diagrams.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="print the tensor of a diagram")
    e.add_argument("file")
    e.add_argument("--basis", help="comma-separated input basis labels")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_eval)

    q = sub.add_parser("equal", help="compare two diagrams semantically")
    q.add_argument("file1")
    q.add_argument("file2")
    q.add_argument("--tol", type=float, default=DEFAULT_TOL)
    q.add_argument("--up-to-scalar", action="store_true")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_equal)

    t = sub.add_parser("translate", help="translate between ZX and ZW")
    t.add_argument("file")
    t.add_argument("--to", choices=(ZX, ZW), required=True)
    t.add_argument("-o", "--output")
    t.add_argument("--provenance", action="store_true", help="also write the node provenance trace")
    t.set_defaults(func=cmd_translate)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--dims", default="2,3,4")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol", type=float, default=DEFAULT_TOL)
    v.add_argument("--count", type=int, default=200, help="diagrams drawn by the translation suites")
    v.add_argument("--max-generators", type=int, default=8)
    v.add_argument("--max-width", type=int, default=4)
    v.add_argument("--offset", type=int, default=1, help="ZX->ZW object shift; only 1 is sound")
    v.add_argument("--corrupt", metavar="RULE", help="perturb one rule to show the suite can fail")
    v.add_argument("--allow-untranscribed", action="store_true")
    v.add_argument("--no-timing", action="store_true", help="omit the duration field from --json output")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("apply", help="replay a rewrite script")
    a.add_argument("file")
    a.add_argument("--script", required=True)
    a.add_argument("-o", "--output")
    a.add_argument("--log", help="write the step log here instead of stderr")
    a.add_argument("--tol", type=float, default=DEFAULT_TOL)
    a.set_defaults(func=cmd_apply)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DiagramError, ResourceError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"error: {msg}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
