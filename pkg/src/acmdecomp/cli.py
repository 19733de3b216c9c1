"""Command-line entry point.

JSON goes to standard output, human-readable progress to standard error.
Exit codes: 0 success, 1 verification or classification failure, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import classifier, decomposition, geometry, tensors, verification
from .structure import AcmStructure, standard_structure, validate_structure

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="acmdecomp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check the almost contact metric axioms")
    p.add_argument("--input", help="structure JSON file (default: standard structure)")
    p.add_argument("--n", type=_positive_int, default=1)
    p.add_argument("--json", help="also write the JSON report to this file")

    p = sub.add_parser("decompose", help="component spectrum of a tensor")
    p.add_argument("--input", required=True, help="tensor JSON file")
    p.add_argument("--json", help="also write the JSON report to this file")

    p = sub.add_parser("classify", help="classify a built-in chart at a point")
    p.add_argument("--chart", required=True)
    p.add_argument("--point", required=True, help="comma-separated coordinates")
    p.add_argument("--step", type=_positive_float, default=geometry.DEFAULT_STEP)
    p.add_argument("--tol", type=_positive_float, default=classifier.GEOMETRY_TOL)
    p.add_argument("--json", help="also write the JSON report to this file")

    p = sub.add_parser("selftest", help="run every property suite")
    p.add_argument("--n", type=_positive_int, default=2)
    p.add_argument("--trials", type=_positive_int, default=20)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--json", help="also write the JSON report to this file")
    return parser


def _emit(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    print(text)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON in {path}: {exc}") from None


def cmd_validate(args) -> int:
    if args.input:
        obj = _load_json(args.input)
        if not isinstance(obj, dict) or not isinstance(obj.get("n"), int):
            raise ValueError("structure object needs an integer field 'n'")
        base = standard_structure(obj["n"])
        S = AcmStructure(n=obj["n"], phi=obj.get("phi", base.phi), xi=obj.get("xi", base.xi),
                         eta=obj.get("eta", base.eta), g=obj.get("g", base.g))
    else:
        S = standard_structure(args.n)
    report = validate_structure(S)
    _emit(report.to_json(), args.json)
    print(f"validate: ok={report.ok} max_residual={report.max_residual:.3e}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_decompose(args) -> int:
    n, F = tensors.tensor_from_json(_load_json(args.input))
    S = standard_structure(n)
    try:
        spec = decomposition.spectrum(S, F)
    except decomposition.NotInSpaceError as exc:
        print(f"decompose: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(spec.to_json(), args.json)
    print(f"decompose: n={n} residual={spec.residual:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_classify(args) -> int:
    try:
        chart = geometry.chart_by_name(args.chart)
    except KeyError as exc:
        raise ValueError(exc.args[0]) from None
    try:
        point = np.array([float(x) for x in args.point.split(",")])
    except ValueError:
        raise ValueError(f"bad --point {args.point!r}") from None
    if point.shape != (chart.dim,):
        raise ValueError(f"chart {chart.name} needs {chart.dim} coordinates")
    try:
        S, F = geometry.fundamental_F(chart, point, args.step)
        spec = decomposition.spectrum(S, F, tol=geometry.TAU_GEO)
    except (geometry.StructureValidationError, decomposition.NotInSpaceError) as exc:
        print(f"classify: {exc}", file=sys.stderr)
        return EXIT_FAIL
    label = classifier.classify(spec, classifier.defining_residuals(S, F), args.tol)
    doc = label.to_json()
    doc["chart"] = chart.name
    doc["point"] = point.tolist()
    _emit(doc, args.json)
    print(f"classify: {chart.name} at {point.tolist()} -> {label.kind} "
          f"{['W%d' % i for i in label.classes]}", file=sys.stderr)
    return EXIT_OK


def cmd_selftest(args) -> int:
    report = verification.run_selftest(args.n, args.trials, args.seed)
    _emit(report, args.json)
    for check in report["checks"]:
        flag = "PASS" if check["pass"] else "FAIL"
        print(f"[{flag}] {check['check']}: max residual {check['max_residual']:.3e} "
              f"(tol {check['tolerance']:.0e})", file=sys.stderr)
    if report["absent_components"]:
        print(f"components {report['absent_components']} absent for n={args.n}",
              file=sys.stderr)
    return EXIT_OK if report["pass"] else EXIT_FAIL


COMMANDS = {
    "validate": cmd_validate,
    "decompose": cmd_decompose,
    "classify": cmd_classify,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors and --help come back as a code, like every other path
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"{args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
