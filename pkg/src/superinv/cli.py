"""Command-line front end.

Three subcommands: `invariants` reports the invariant functions of a matrix
file, `reduce` emits a canonical decomposition, and `verify` runs the seeded
property suites.  Exit codes: 0 success, 1 property failure, 2 usage,
3 input validation, 4 violated mathematical precondition.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import grassmann
from .errors import (
    GeneratorCountMismatch,
    MultipleEigenvalue,
    NonSplitting,
    NotBlockDiagonalSquare,
    NotInL,
    NotInvariant,
    NotSymmetric,
    ShapeMismatch,
    SharedEigenvalue,
    SingularBody,
    SingularZ,
    SuperInvError,
    UnconstrainedParity,
    ValidationError,
    ZeroBody,
    ZeroDiscriminant,
    ZeroEigenvalue,
)
from .reduction import (
    SpectralDecomposition,
    antidiagonalize,
    block_diagonalize,
    diagonalize,
    reduce_odd,
)
from .supermatrix import ANY, ODD, Queer, SuperMatrix
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_PRECONDITION = 4

_VALIDATION = (ValidationError, GeneratorCountMismatch, ShapeMismatch, UnconstrainedParity)
_PRECONDITION = (
    NonSplitting,
    SharedEigenvalue,
    MultipleEigenvalue,
    ZeroEigenvalue,
    NotBlockDiagonalSquare,
    SingularZ,
    SingularBody,
    ZeroBody,
    ZeroDiscriminant,
    NotInL,
    NotSymmetric,
    NotInvariant,
)


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_matrix(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            obj = json.load(handle)
    except OSError as exc:
        raise ValidationError("cannot read %s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise ValidationError("invalid JSON in %s: %s" % (path, exc)) from exc
    return SuperMatrix.from_obj(obj)


def _scalar_obj(x):
    return x.to_obj()


def cmd_invariants(args):
    a = _load_matrix(args.matrix)
    report = {"shape": a.shape.to_obj(), "parity": a.parity, "grassmann_q": a.gq}
    if isinstance(a.shape, Queer):
        n = a.shape.n
        report["qtr"] = _scalar_obj(a.qtr())
        try:
            report["qet"] = _scalar_obj(a.qet())
        except SingularBody:
            report["qet"] = None
        report["tau"] = [_scalar_obj(v) for v in a.tau_values(2 * n)]
    else:
        if a.parity != ANY:
            report["str"] = _scalar_obj(a.supertrace())
        if a.shape.p == a.shape.q and a.parity == ODD:
            report["tau"] = [_scalar_obj(v) for v in a.tau_values(2 * a.shape.p)]
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        lines = []
        for key in sorted(report):
            value = report[key]
            if key == "tau":
                for k, item in enumerate(value, start=1):
                    lines.append("tau[%d] = %s" % (k, _scalar_text(item)))
            elif isinstance(value, dict) and "terms" in value:
                lines.append("%s = %s" % (key, _scalar_text(value)))
            else:
                lines.append("%s = %s" % (key, json.dumps(value, sort_keys=True)))
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _scalar_text(obj):
    if obj is None:
        return "undefined"
    from .grassmann import GrassmannScalar

    return str(GrassmannScalar.from_obj(obj))


_MODES = {
    "blockdiag": block_diagonalize,
    "diagonalize": diagonalize,
    "odd": reduce_odd,
}


def cmd_reduce(args):
    a = _load_matrix(args.matrix)
    if args.mode == "antidiag":
        g = antidiagonalize(a)
        dim = a.dim
        dec = SpectralDecomposition(
            conjugator=g,
            blocks=[(None, a.conjugate(g))],
            partition=[list(range(1, dim + 1))],
            parity=a.parity,
        )
    else:
        dec = _MODES[args.mode](a)
    obj = dec.to_obj()
    # the emitted document must re-verify after a parse round trip
    reparsed = SpectralDecomposition.from_obj(json.loads(json.dumps(obj)))
    if not reparsed.verify(a):
        raise AssertionError("internal: emitted decomposition does not re-verify")
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _format_records(records, fmt, seed, trials):
    failures = sum(1 for r in records if r["status"] != "pass")
    summary = {
        "summary": {
            "claims": len(records),
            "failures": failures,
            "seed": seed,
            "trials": trials,
        }
    }
    if fmt == "json":
        lines = [json.dumps(r, sort_keys=True) for r in records]
        lines.append(json.dumps(summary, sort_keys=True))
    else:
        lines = []
        for r in records:
            mark = "PASS" if r["status"] == "pass" else "FAIL"
            lines.append("%s %s/%s (trials=%d)" % (mark, r["suite"], r["claim"], r["trials"]))
            if r["counterexample"]:
                lines.append("     counterexample: %s" % json.dumps(r["counterexample"], sort_keys=True))
        lines.append("claims=%d failures=%d seed=%d trials=%d"
                     % (len(records), failures, seed, trials))
    return "\n".join(lines) + "\n", failures


def cmd_verify(args):
    workers = _worker_count()
    if args.suite == "all" and workers > 1:
        names = sorted(SUITES)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(SUITES[name], args.seed + idx * 1000, args.trials)
                for idx, name in enumerate(names)
            ]
            records = []
            for name, future in zip(names, futures):
                for record in future.result():
                    record["suite"] = name
                    records.append(record)
    else:
        records = run_suite(args.suite, args.seed, args.trials)
    text, failures = _format_records(records, args.format, args.seed, args.trials)
    _emit(text, args.out)
    return EXIT_FAILURE if failures else EXIT_OK


def _worker_count():
    raw = os.environ.get("SUPERINV_WORKERS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValidationError("SUPERINV_WORKERS must be an integer") from exc
    if value < 1:
        raise ValidationError("SUPERINV_WORKERS must be at least 1")
    return value


def _apply_env():
    raw = os.environ.get("SUPERINV_MAX_Q")
    if raw is not None:
        try:
            grassmann.set_generator_cap(int(raw))
        except ValueError as exc:
            raise ValidationError("SUPERINV_MAX_Q must be an integer") from exc


def build_parser():
    parser = argparse.ArgumentParser(
        prog="superinv",
        description="Exact invariants and canonical forms of supermatrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_inv = sub.add_parser("invariants", help="report the invariant functions of a matrix file")
    p_inv.add_argument("matrix", help="path to a matrix JSON file")
    p_inv.add_argument("--out", default=None, help="output path (default: stdout)")
    p_inv.add_argument("--format", choices=("json", "text"), default="json")
    p_inv.set_defaults(func=cmd_invariants)

    p_red = sub.add_parser("reduce", help="emit a canonical decomposition of a matrix file")
    p_red.add_argument("matrix", help="path to a matrix JSON file")
    p_red.add_argument("--mode", choices=("blockdiag", "diagonalize", "odd", "antidiag"),
                       required=True)
    p_red.add_argument("--out", default=None)
    p_red.add_argument("--format", choices=("json", "text"), default="json")
    p_red.set_defaults(func=cmd_reduce)

    p_ver = sub.add_parser("verify", help="run a seeded property suite")
    p_ver.add_argument("suite", help="suite name or 'all'")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--trials", type=int, default=25)
    p_ver.add_argument("--out", default=None)
    p_ver.add_argument("--format", choices=("json", "text"), default="json")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        if args.suite != "all" and args.suite not in SUITES:
            parser.error("unknown suite %r (choose from %s or 'all')"
                         % (args.suite, ", ".join(sorted(SUITES))))
        if args.trials < 1:
            parser.error("--trials must be at least 1")
    try:
        _apply_env()
        return args.func(args)
    except _VALIDATION as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION
    except _PRECONDITION as exc:
        print("precondition error: %s" % exc, file=sys.stderr)
        return EXIT_PRECONDITION
    except SuperInvError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
